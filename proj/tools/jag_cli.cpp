// Copyright 2026 The JAG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: workload generation, ground truth, index building,
// searching, evaluation sweeps, ablation grids and baselines.
//
// File conventions for a workload prefix P:
//   P.base.fbin  P.base.abin  P.query.fbin  P.query.qbin  P.gt.ibin

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "jag/jag.hpp"

namespace {

using namespace jag;

unsigned default_threads() {
  if (const char* env = std::getenv("JAG_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return 1;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (...) {
      fail(ErrorCode::invalid_argument, "cannot parse number '" + item + "'");
    }
  }
  return out;
}

std::vector<std::uint32_t> parse_beams(const std::string& text) {
  std::vector<std::uint32_t> out;
  for (double v : parse_list(text)) {
    require(v >= 1 && v == static_cast<std::uint32_t>(v), ErrorCode::invalid_argument,
            "beam widths must be positive integers");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

Family parse_family(const std::string& name) {
  if (name == "label") return Family::label;
  if (name == "range" || name == "scalar") return Family::scalar;
  if (name == "subset" || name == "bitset") return Family::bitset;
  if (name == "boolean") return Family::boolean;
  fail(ErrorCode::invalid_argument, "unknown family '" + name + "'");
}

template <class Space>
Dataset<Space> load_base(const std::string& prefix) {
  auto vf = read_fbin(prefix + ".base.fbin");
  auto attrs = read_abin<Space>(prefix + ".base.abin");
  require(attrs.size() == vf.n, ErrorCode::dimension_mismatch,
          "vector and attribute files hold different point counts");
  return Dataset<Space>(vf.dim, std::move(vf.values), std::move(attrs));
}

template <class Space>
QuerySet<Space> load_queries(const std::string& prefix) {
  auto vf = read_fbin(prefix + ".query.fbin");
  auto filters = read_qbin<Space>(prefix + ".query.qbin");
  require(filters.size() == vf.n, ErrorCode::dimension_mismatch,
          "query vector and filter files hold different counts");
  return QuerySet<Space>(vf.dim, std::move(vf.values), std::move(filters));
}

template <class Fn>
decltype(auto) with_family_of_prefix(const std::string& prefix, Fn&& fn) {
  return dispatch_family(read_abin_family(prefix + ".base.abin"), std::forward<Fn>(fn));
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) fail(ErrorCode::io_error, "cannot open " + path + " for writing");
  return file;
}

// ---------------------------------------------------------------------------

struct GenOptions {
  std::string family = "range";
  std::size_t n = 10000;
  std::size_t d = 32;
  std::size_t queries = 100;
  std::uint32_t labels = 12;
  unsigned variables = kBooleanVariables;
  std::uint64_t seed = 1;
  std::string prefix;
};

void run_gen(const GenOptions& o) {
  const auto base = gen_vectors(o.n, o.d, o.seed, "vectors");
  const auto queries = gen_vectors(o.queries, o.d, o.seed, "queries");
  write_fbin(o.prefix + ".base.fbin", base, static_cast<std::uint32_t>(o.d));
  write_fbin(o.prefix + ".query.fbin", queries, static_cast<std::uint32_t>(o.d));
  auto emit = [&]<class Space>(const auto& wl) {
    write_abin<Space>(o.prefix + ".base.abin", wl.attributes);
    write_qbin<Space>(o.prefix + ".query.qbin", wl.filters);
  };
  switch (parse_family(o.family)) {
    case Family::label:
      emit.template operator()<LabelSpace>(gen_label_workload(o.n, o.queries, o.labels, o.seed));
      break;
    case Family::scalar:
      emit.template operator()<RangeSpace>(gen_range_workload(o.n, o.queries, o.seed));
      break;
    case Family::bitset:
      emit.template operator()<SubsetSpace>(gen_subset_workload(o.n, o.queries, o.seed));
      break;
    case Family::boolean:
      emit.template operator()<BooleanSpace>(
          gen_boolean_workload(o.n, o.queries, o.seed, o.variables));
      break;
  }
  std::cerr << "wrote " << o.prefix << ".{base,query}.* (" << o.n << " points, " << o.queries
            << " queries)\n";
}

struct GtOptions {
  std::string prefix;
  std::uint32_t k = 10;
  unsigned threads = 1;
  std::string out;
};

void run_gt(const GtOptions& o) {
  with_family_of_prefix(o.prefix, [&](auto space) {
    using S = decltype(space);
    const auto data = load_base<S>(o.prefix);
    const auto qs = load_queries<S>(o.prefix);
    const auto truth = brute_force_ground_truth(data, qs, o.k, o.threads);
    write_gt(o.out.empty() ? o.prefix + ".gt.ibin" : o.out, truth, o.k);
  });
}

struct BuildOptions {
  std::string prefix;
  std::string mode = "threshold";
  std::string levels = "1,0.01,0";
  std::string multipliers = "0,1,10";
  double scale = -1;
  std::uint32_t degree = 32;
  float alpha = 1.2f;
  std::uint32_t build_beam = 64;
  std::uint32_t sample = 500;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool deterministic = false;
  bool frequency_weighted = false;
  std::string out;
};

BuildParams to_params(const BuildOptions& o) {
  BuildParams p;
  p.degree = o.degree;
  p.alpha = o.alpha;
  p.build_beam = o.build_beam;
  p.threshold_sample_size = o.sample;
  p.seed = o.seed;
  p.threads = o.deterministic ? 1 : o.threads;
  if (o.mode == "threshold") {
    p.mode = ThresholdLevels{parse_list(o.levels)};
  } else if (o.mode == "weight") {
    WeightMultipliers w{parse_list(o.multipliers), std::nullopt};
    if (o.scale >= 0) w.scale = o.scale;
    p.mode = w;
  } else {
    fail(ErrorCode::invalid_argument, "mode must be threshold or weight");
  }
  p.validate();
  return p;
}

void run_build(const BuildOptions& o) {
  const auto params = to_params(o);
  with_family_of_prefix(o.prefix, [&](auto space) {
    using S = decltype(space);
    auto data = load_base<S>(o.prefix);
    S configured{};
    if constexpr (std::is_same_v<S, SubsetSpace>) {
      if (o.frequency_weighted) configured = SubsetSpace(frequency_weighted_config(data.attributes()));
    }
    const auto index = build(std::move(data), params, configured);
    save(index, o.out);
    std::cerr << "built " << index.size() << " points, " << index.edge_count() << " edges -> "
              << o.out << "\n";
  });
}

struct SearchOptions {
  std::string index;
  std::string prefix;
  std::uint32_t k = 10;
  std::uint32_t beam = 64;
  bool post = false;
  std::string out;
};

template <class S>
void check_same_family(const JagIndex<S>&, const std::string& prefix) {
  require(read_abin_family(prefix + ".base.abin") == S::family, ErrorCode::tag_mismatch,
          "index and workload hold different attribute families");
}

void run_search(const SearchOptions& o) {
  auto any = load_any(o.index);
  std::visit(
      [&](const auto& index) {
        using S = std::decay_t<decltype(index.space())>;
        check_same_family(index, o.prefix);
        const auto qs = load_queries<S>(o.prefix);
        std::vector<std::vector<std::uint32_t>> ids(qs.size());
        SearchScratch scratch;
        std::uint64_t dc = 0;
        for (std::size_t i = 0; i < qs.size(); ++i) {
          const SearchParams sp{o.k, o.beam};
          auto r = o.post ? post_filter_search(index, qs.vector(i), qs.filter(i), sp, &scratch)
                          : query(index, qs.vector(i), qs.filter(i), sp, &scratch);
          ids[i] = std::move(r.ids);
          dc += r.dc_count;
        }
        if (!o.out.empty()) write_gt(o.out, ids, o.k);
        std::cout << "queries=" << qs.size() << " mean_dc="
                  << (qs.size() ? static_cast<double>(dc) / static_cast<double>(qs.size()) : 0.0)
                  << "\n";
      },
      any);
}

struct EvalOptions {
  std::vector<std::string> indices;
  std::vector<std::string> post_indices;
  bool pre = false;
  std::string prefix;
  std::string gt;
  std::string beams = "10,20,50,100,200";
  std::string bands = "1,0.1,0.01,0.001,0.0001";
  bool by_band = false;
  std::uint32_t k = 10;
  unsigned threads = 1;
  std::string config = "default";
  std::string out;
  double budget = 5000;
};

std::string base_name(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

// Loads the ground truth file, or computes it when absent.
template <class S>
std::vector<std::vector<std::uint32_t>> truth_for(const EvalOptions& o, const Dataset<S>& data,
                                                  const QuerySet<S>& qs) {
  const std::string path = o.gt.empty() ? o.prefix + ".gt.ibin" : o.gt;
  try {
    auto gt = read_gt(path);
    if (gt.k >= o.k && gt.ids.size() == qs.size()) return gt.ids;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::io_error) throw;
  }
  auto truth = brute_force_ground_truth(data, qs, o.k, o.threads);
  write_gt(path, truth, o.k);
  return truth;
}

template <class S>
struct Loaded {
  std::vector<std::unique_ptr<JagIndex<S>>> indices;
  std::vector<Algorithm> algorithms;
};

template <class S>
Loaded<S> load_algorithms(const EvalOptions& o, const QuerySet<S>& qs, const Dataset<S>& data) {
  Loaded<S> loaded;
  auto add = [&](const std::string& path, bool post) {
    loaded.indices.push_back(std::make_unique<JagIndex<S>>(load<S>(path)));
    const JagIndex<S>* index = loaded.indices.back().get();
    loaded.algorithms.push_back(
        {(post ? "post:" : "jag:") + base_name(path),
         [index, post, &qs, k = o.k](std::size_t q, std::uint32_t beam, SearchScratch& s) {
           const SearchParams sp{k, std::max(beam, k)};
           auto r = post ? post_filter_search(*index, qs.vector(q), qs.filter(q), sp, &s)
                         : query(*index, qs.vector(q), qs.filter(q), sp, &s);
           return QueryOutcome{std::move(r.ids), r.dc_count};
         }});
  };
  for (const auto& p : o.indices) add(p, false);
  for (const auto& p : o.post_indices) add(p, true);
  if (o.pre) {
    loaded.algorithms.push_back({"pre", [&qs, &data, k = o.k](std::size_t q, std::uint32_t,
                                                                SearchScratch&) {
                                   auto r = pre_filter_search(data, qs.vector(q), qs.filter(q), k);
                                   return QueryOutcome{std::move(r.ids), r.dc_count};
                                 }});
  }
  require(!loaded.algorithms.empty(), ErrorCode::invalid_argument,
          "nothing to evaluate: pass --index, --post or --pre");
  return loaded;
}

template <class S>
std::vector<std::string> band_labels(const EvalOptions& o, const Dataset<S>& data,
                                     const QuerySet<S>& qs) {
  const auto centers = parse_list(o.bands);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    labels.push_back(selectivity_band(selectivity(data, qs.filter(i)), centers));
  }
  return labels;
}

void run_eval(const EvalOptions& o) {
  with_family_of_prefix(o.prefix, [&](auto space) {
    using S = decltype(space);
    const auto data = load_base<S>(o.prefix);
    const auto qs = load_queries<S>(o.prefix);
    const auto truth = truth_for(o, data, qs);
    const auto loaded = load_algorithms(o, qs, data);
    ExperimentConfig cfg;
    cfg.config_id = o.config;
    cfg.beams = parse_beams(o.beams);
    cfg.k = o.k;
    cfg.threads = o.threads;
    if (o.by_band) cfg.bands = band_labels(o, data, qs);
    const auto report = run_experiment(loaded.algorithms, truth, cfg);
    std::ofstream file;
    report.write_csv(open_output(o.out, file));
  });
}

void run_ablate(const EvalOptions& o) {
  with_family_of_prefix(o.prefix, [&](auto space) {
    using S = decltype(space);
    const auto data = load_base<S>(o.prefix);
    const auto qs = load_queries<S>(o.prefix);
    const auto truth = truth_for(o, data, qs);
    const auto loaded = load_algorithms(o, qs, data);
    const auto labels = band_labels(o, data, qs);
    std::vector<std::string> order;
    for (double c : parse_list(o.bands)) {
      const std::vector<double> centers = parse_list(o.bands);
      order.push_back(selectivity_band(c, centers));
    }
    AblationConfig cfg;
    cfg.k = o.k;
    cfg.threads = o.threads;
    cfg.dc_budget = o.budget;
    const auto grid = run_ablation_grid(loaded.algorithms, truth, labels, order, cfg);
    std::ofstream file;
    grid.write_csv(open_output(o.out, file));
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Filtered nearest-neighbor search with joint attribute graphs"};
  app.require_subcommand(1);
  const unsigned threads = default_threads();

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "generate a synthetic workload");
  g->add_option("--family", gen.family, "label | range | subset | boolean")->capture_default_str();
  g->add_option("--n", gen.n, "dataset size")->capture_default_str();
  g->add_option("--d", gen.d, "vector dimension")->capture_default_str();
  g->add_option("--queries", gen.queries, "number of queries")->capture_default_str();
  g->add_option("--labels", gen.labels, "label count (label family)")->capture_default_str();
  g->add_option("--variables", gen.variables, "variables (boolean family)")->capture_default_str();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--out", gen.prefix, "output prefix")->required();

  GtOptions gt;
  gt.threads = threads;
  auto* t = app.add_subcommand("gt", "exact filtered ground truth");
  t->add_option("--prefix", gt.prefix, "workload prefix")->required();
  t->add_option("--k", gt.k)->capture_default_str();
  t->add_option("--threads", gt.threads)->capture_default_str();
  t->add_option("--out", gt.out, "defaults to <prefix>.gt.ibin");

  BuildOptions bo;
  bo.threads = threads;
  auto* b = app.add_subcommand("build", "build an index");
  b->add_option("--prefix", bo.prefix, "workload prefix")->required();
  b->add_option("--mode", bo.mode, "threshold | weight")->capture_default_str();
  b->add_option("--levels", bo.levels, "quantile levels, descending")->capture_default_str();
  b->add_option("--multipliers", bo.multipliers, "weight multipliers, ascending")
      ->capture_default_str();
  b->add_option("--scale", bo.scale, "explicit weight scale h (weight mode)");
  b->add_option("--deg", bo.degree, "degree bound R")->capture_default_str();
  b->add_option("--alpha", bo.alpha)->capture_default_str();
  b->add_option("--lbuild", bo.build_beam, "build beam width")->capture_default_str();
  b->add_option("--sample", bo.sample, "threshold/weight sample size")->capture_default_str();
  b->add_option("--seed", bo.seed)->capture_default_str();
  b->add_option("--threads", bo.threads)->capture_default_str();
  b->add_flag("--deterministic", bo.deterministic, "single-threaded, id-order insertion");
  b->add_flag("--frequency-weighted", bo.frequency_weighted,
              "subset family: weight shared labels by log(1/frequency)");
  b->add_option("--out", bo.out, "index file")->required();

  SearchOptions so;
  auto* s = app.add_subcommand("search", "run every query once at a single beam width");
  s->add_option("--index", so.index)->required();
  s->add_option("--prefix", so.prefix, "workload prefix (queries)")->required();
  s->add_option("--k", so.k)->capture_default_str();
  s->add_option("--beam", so.beam)->capture_default_str();
  s->add_flag("--post", so.post, "post-filter the unfiltered search");
  s->add_option("--out", so.out, "result ids in ground-truth layout");

  EvalOptions eo;
  eo.threads = threads;
  auto add_eval_options = [&](CLI::App* c) {
    c->add_option("--prefix", eo.prefix, "workload prefix")->required();
    c->add_option("--index", eo.indices, "JAG index files");
    c->add_option("--post", eo.post_indices, "indices searched with post-filtering");
    c->add_flag("--pre", eo.pre, "include the pre-filter scan");
    c->add_option("--gt", eo.gt, "ground truth file (computed and cached when absent)");
    c->add_option("--bands", eo.bands, "selectivity band centers")->capture_default_str();
    c->add_option("--k", eo.k)->capture_default_str();
    c->add_option("--threads", eo.threads)->capture_default_str();
    c->add_option("--out", eo.out, "CSV path, stdout when omitted");
  };
  auto* e = app.add_subcommand("eval", "beam sweep report as CSV");
  add_eval_options(e);
  e->add_option("--beams", eo.beams)->capture_default_str();
  e->add_option("--config", eo.config)->capture_default_str();
  e->add_flag("--by-band", eo.by_band, "add per-selectivity-band rows");
  auto* a = app.add_subcommand("ablate", "best recall per index and band within a DC budget");
  add_eval_options(a);
  a->add_option("--budget", eo.budget, "mean distance computations per query")
      ->capture_default_str();

  std::string baseline_kind;
  auto* bl = app.add_subcommand("baseline", "evaluate the pre- or post-filter baseline");
  bl->add_option("kind", baseline_kind, "pre | post")->required();
  add_eval_options(bl);
  bl->add_option("--beams", eo.beams)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (g->parsed()) run_gen(gen);
    if (t->parsed()) run_gt(gt);
    if (b->parsed()) run_build(bo);
    if (s->parsed()) run_search(so);
    if (e->parsed()) run_eval(eo);
    if (a->parsed()) run_ablate(eo);
    if (bl->parsed()) {
      if (baseline_kind == "pre") {
        eo.pre = true;
        eo.indices.clear();
        eo.post_indices.clear();
      } else if (baseline_kind == "post") {
        require(!eo.indices.empty() || !eo.post_indices.empty(), ErrorCode::invalid_argument,
                "post baseline needs --index with an unfiltered index");
        eo.post_indices.insert(eo.post_indices.end(), eo.indices.begin(), eo.indices.end());
        eo.indices.clear();
        eo.pre = false;
      } else {
        fail(ErrorCode::invalid_argument, "baseline kind must be pre or post");
      }
      run_eval(eo);
    }
  } catch (const Error& err) {
    std::cerr << "jag: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "jag: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
