// hcal command-line tool. Talks to the library only through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hcal/hcal.h"

namespace {

struct BundleDeleter {
  void operator()(hcal_bundle* b) const { hcal_bundle_free(b); }
};
struct ModelDeleter {
  void operator()(hcal_model* m) const { hcal_model_free(m); }
};
struct StringDeleter {
  void operator()(char* s) const { hcal_string_free(s); }
};
using BundlePtr = std::unique_ptr<hcal_bundle, BundleDeleter>;
using ModelPtr = std::unique_ptr<hcal_model, ModelDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

constexpr int kUsageExit = HCAL_ERR_PRECONDITION;

// Carries a non-zero status out of a subcommand.
struct Failure {
  hcal_status status;
};

void check(hcal_status status) {
  if (status != HCAL_OK) {
    std::cerr << "hcal: " << hcal_last_error() << "\n";
    throw Failure{status};
  }
}

BundlePtr load_bundle(const std::string& dir) {
  hcal_bundle* b = nullptr;
  check(hcal_bundle_read(dir.c_str(), &b));
  return BundlePtr(b);
}

ModelPtr load_model(const std::string& dir) {
  hcal_model* m = nullptr;
  check(hcal_model_read(dir.c_str(), &m));
  return ModelPtr(m);
}

void output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "hcal: cannot write " << path << "\n";
    throw Failure{HCAL_ERR_FORMAT};
  }
  out << text << "\n";
}

void output(StringPtr json, const std::string& path) { output(std::string(json.get()), path); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "hcal: cannot open " << path << "\n";
    throw Failure{HCAL_ERR_FORMAT};
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_task(hcal_bundle* bundle, hcal_model* unembedding, const std::string& dir, std::size_t vocab_size,
                std::uint64_t seed) {
  check(hcal_bundle_write(bundle, (dir + "/hidden").c_str()));
  check(hcal_model_write(unembedding, (dir + "/unembedding").c_str()));
  if (vocab_size > 0) {
    hcal_bundle* vocab = nullptr;
    check(hcal_vocab_view(bundle, unembedding, vocab_size, seed, &vocab));
    BundlePtr guard(vocab);
    check(hcal_bundle_write(vocab, (dir + "/vocab").c_str()));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nearest-centroid calibration toolkit for in-context-learning features"};
  app.require_subcommand(1);
  std::string out_path;

  // synth
  hcal_synth_spec spec;
  hcal_synth_spec_default(&spec);
  std::string synth_out;
  std::size_t vocab_size = 0;
  std::vector<int> k_values;
  double convergence = 0.5;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic Gaussian task");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--classes", spec.num_classes, "Number of labels")->capture_default_str();
  synth->add_option("--dim", spec.dim, "Hidden dimension")->capture_default_str();
  synth->add_option("--distance", spec.inter_centroid_distance, "Pairwise centroid distance")->capture_default_str();
  synth->add_option("--std", spec.intra_class_std, "Intra-class standard deviation")->capture_default_str();
  synth->add_option("--per-class", spec.records_per_class, "Real queries per class")->capture_default_str();
  synth->add_option("--misalignment", spec.misalignment_deg, "Un-embedding rotation in degrees")->capture_default_str();
  synth->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
  synth->add_option("--mean-norm", spec.mean_norm, "Norm of the common mean vector")->capture_default_str();
  synth->add_option("--prior-bias", spec.prior_bias, "Logit bias towards label 0")->capture_default_str();
  synth->add_option("--pseudo", spec.pseudo_records, "Pseudo records per kind")->capture_default_str();
  synth->add_option("--vocab-size", vocab_size, "Also write a vocab_prob view of this size (0 = no)");
  synth->add_option("--k-values", k_values, "Dynamics sweep: one task per demonstration count")->delimiter(',');
  synth->add_option("--convergence", convergence, "Sweep std shrink constant c in std/(1+c k)")->capture_default_str();

  // split
  std::string split_in, split_cal_out, split_test_out;
  std::uint64_t split_seed = 42;
  std::size_t split_cal = 0, split_test = 0;
  auto* split = app.add_subcommand("split", "Seeded calibration/test split");
  split->add_option("--in", split_in, "Input bundle")->required();
  split->add_option("--seed", split_seed, "Shuffle seed")->capture_default_str();
  split->add_option("--calibration", split_cal, "Calibration size")->required();
  split->add_option("--test", split_test, "Test size")->required();
  split->add_option("--out-calibration", split_cal_out, "Calibration bundle directory")->required();
  split->add_option("--out-test", split_test_out, "Test bundle directory")->required();

  // fit
  hcal_fit_options fit_opts;
  hcal_fit_options_default(&fit_opts);
  std::string fit_in, fit_out, fit_unembedding, fit_method = "hiddc", fit_similarity = "neg_euclidean",
                                                fit_batch = "test";
  auto* fit = app.add_subcommand("fit", "Fit a decoding method on a calibration bundle");
  fit->add_option("--in", fit_in, "Calibration bundle")->required();
  fit->add_option("--method", fit_method, "vanilla|conc|batc|domc|knn|centc|hiddc")
      ->check(CLI::IsMember({"vanilla", "conc", "batc", "domc", "knn", "centc", "hiddc"}))
      ->capture_default_str();
  fit->add_option("--per-class", fit_opts.per_class, "Estimation samples per class (0 = all)")->capture_default_str();
  fit->add_option("--seed", fit_opts.seed, "Sampling seed")->capture_default_str();
  fit->add_option("--unembedding", fit_unembedding, "Un-embedding artifact (token methods)");
  fit->add_option("--similarity", fit_similarity, "neg_euclidean|cosine")->capture_default_str();
  fit->add_option("--k-neighbors", fit_opts.k_neighbors, "k for the k-NN method")->capture_default_str();
  fit->add_option("--batch-source", fit_batch, "test|calibration")->capture_default_str();
  fit->add_option("--out", fit_out, "Model artifact directory")->required();

  // predict / evaluate / transfer / overlap share --model and --in
  std::string model_dir, data_dir;
  std::size_t grid = 512;
  bool curves = false;
  auto* predict = app.add_subcommand("predict", "Predict class ids for the real queries of a bundle");
  auto* evaluate = app.add_subcommand("evaluate", "Macro F1 / accuracy report for a test bundle");
  auto* transfer = app.add_subcommand("transfer", "Evaluate a model fitted on another dataset");
  auto* overlap = app.add_subcommand("overlap", "Averaged overlap of the pairwise criterion densities");
  for (auto* sub : {predict, evaluate, transfer, overlap}) {
    sub->add_option("--model", model_dir, "Model artifact directory")->required();
    sub->add_option("--in", data_dir, "Bundle directory")->required();
    sub->add_option("--out", out_path, "Write JSON here instead of stdout");
  }
  overlap->add_option("--grid", grid, "KDE grid size")->capture_default_str();
  overlap->add_flag("--curves", curves, "Include the KDE curves");

  // pca
  std::size_t pca_dims = 2;
  std::string pca_unembedding;
  auto* pca = app.add_subcommand("pca", "PCA projections and un-embedding directions for plotting");
  pca->add_option("--in", data_dir, "Bundle directory")->required();
  pca->add_option("--dims", pca_dims, "Number of components")->capture_default_str();
  pca->add_option("--unembedding", pca_unembedding, "Un-embedding artifact");
  pca->add_option("--out", out_path, "Write JSON here instead of stdout");

  // clusters
  auto* clusters = app.add_subcommand("clusters", "Averaged centroid distance and intra-class spread");
  clusters->add_option("--in", data_dir, "Bundle directory")->required();
  clusters->add_option("--out", out_path, "Write JSON here instead of stdout");

  // report
  std::vector<std::string> report_files;
  auto* report = app.add_subcommand("report", "Aggregate evaluation reports: mean and std per method");
  report->add_option("reports", report_files, "Evaluation report JSON files")->required();
  report->add_option("--out", out_path, "Write JSON here instead of stdout");

  // validate
  auto* validate = app.add_subcommand("validate", "Check a bundle and print its summary");
  validate->add_option("--in", data_dir, "Bundle directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageExit;
  }

  try {
    if (synth->parsed()) {
      if (k_values.empty()) {
        hcal_bundle* b = nullptr;
        hcal_model* u = nullptr;
        check(hcal_synth(&spec, &b, &u));
        BundlePtr bg(b);
        ModelPtr ug(u);
        write_task(b, u, synth_out, vocab_size, spec.seed);
      } else {
        for (int k : k_values) {
          hcal_bundle* b = nullptr;
          hcal_model* u = nullptr;
          check(hcal_synth_sweep_point(&spec, k, convergence, &b, &u));
          BundlePtr bg(b);
          ModelPtr ug(u);
          write_task(b, u, synth_out + "/k" + std::to_string(k), vocab_size, spec.seed);
        }
      }
    } else if (split->parsed()) {
      auto in = load_bundle(split_in);
      hcal_bundle* cal = nullptr;
      hcal_bundle* test = nullptr;
      char* warnings = nullptr;
      check(hcal_split(in.get(), split_seed, split_cal, split_test, &cal, &test, &warnings));
      BundlePtr cg(cal), tg(test);
      StringPtr wg(warnings);
      if (std::string(warnings) != "[]") std::cerr << "hcal: warnings: " << warnings << "\n";
      check(hcal_bundle_write(cal, split_cal_out.c_str()));
      check(hcal_bundle_write(test, split_test_out.c_str()));
    } else if (fit->parsed()) {
      auto cal = load_bundle(fit_in);
      ModelPtr unembedding;
      if (!fit_unembedding.empty()) unembedding = load_model(fit_unembedding);
      fit_opts.method = fit_method.c_str();
      fit_opts.similarity = fit_similarity.c_str();
      fit_opts.batch_source = fit_batch.c_str();
      hcal_model* model = nullptr;
      check(hcal_fit(cal.get(), &fit_opts, unembedding.get(), &model));
      ModelPtr mg(model);
      check(hcal_model_write(model, fit_out.c_str()));
    } else if (predict->parsed()) {
      auto model = load_model(model_dir);
      auto bundle = load_bundle(data_dir);
      std::size_t count = 0;
      std::vector<std::int32_t> ids(hcal_bundle_size(bundle.get()));
      check(hcal_predict(model.get(), bundle.get(), ids.data(), ids.size(), &count));
      ids.resize(count);
      std::ostringstream json;
      json << "{\"predictions\": [";
      for (std::size_t i = 0; i < ids.size(); ++i) json << (i ? ", " : "") << ids[i];
      json << "]}";
      output(json.str(), out_path);
    } else if (evaluate->parsed() || transfer->parsed()) {
      auto model = load_model(model_dir);
      auto bundle = load_bundle(data_dir);
      char* json = nullptr;
      check(hcal_evaluate(model.get(), bundle.get(), transfer->parsed() ? 1 : 0, &json));
      output(StringPtr(json), out_path);
    } else if (overlap->parsed()) {
      auto model = load_model(model_dir);
      auto bundle = load_bundle(data_dir);
      char* json = nullptr;
      check(hcal_overlap(model.get(), bundle.get(), grid, curves ? 1 : 0, &json));
      output(StringPtr(json), out_path);
    } else if (pca->parsed()) {
      auto bundle = load_bundle(data_dir);
      ModelPtr unembedding;
      if (!pca_unembedding.empty()) unembedding = load_model(pca_unembedding);
      char* json = nullptr;
      check(hcal_pca(bundle.get(), pca_dims, unembedding.get(), &json));
      output(StringPtr(json), out_path);
    } else if (clusters->parsed()) {
      auto bundle = load_bundle(data_dir);
      char* json = nullptr;
      check(hcal_cluster_metrics(bundle.get(), &json));
      output(StringPtr(json), out_path);
    } else if (report->parsed()) {
      std::vector<std::string> texts;
      for (const auto& f : report_files) texts.push_back(slurp(f));
      std::vector<const char*> ptrs;
      for (const auto& t : texts) ptrs.push_back(t.c_str());
      char* json = nullptr;
      check(hcal_report(ptrs.data(), ptrs.size(), &json));
      output(StringPtr(json), out_path);
    } else if (validate->parsed()) {
      auto bundle = load_bundle(data_dir);
      char* json = nullptr;
      check(hcal_bundle_summary_json(bundle.get(), &json));
      output(StringPtr(json), "");
    }
  } catch (const Failure& f) {
    return static_cast<int>(f.status);
  }
  return 0;
}
