#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qgdtn/catalog.hpp"
#include "qgdtn/dtn.hpp"
#include "qgdtn/error.hpp"
#include "qgdtn/graph_io.hpp"
#include "qgdtn/lambda_search.hpp"
#include "qgdtn/positivity.hpp"
#include "qgdtn/spectra.hpp"
#include "qgdtn/sweep.hpp"

using nlohmann::json;
using namespace qgdtn;

namespace {

enum Exit { kOk = 0, kFailure = 1, kValidation = 2, kBudget = 3, kMarginal = 4 };

struct Globals {
  std::string graph_file;
  std::string catalog;
  bool assert_independent = false;
  double tol = ClassifierConfig{}.sign_tolerance;
  std::string out_file;
  std::string format;
};

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::BudgetExhausted: return kBudget;
    case ErrorCode::AtPole:
    case ErrorCode::InnerBlockSingular:
    case ErrorCode::PoleCluster:
    case ErrorCode::ResolutionTooLow:
    case ErrorCode::PatternViolation: return kMarginal;
    default: return kValidation;
  }
}

json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

json matrix_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(number(M(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json evidence_json(const Evidence& e) {
  json j{{"criterion", e.criterion},
         {"metzler_margin", number(e.metzler_margin)},
         {"irreducible", e.irreducible},
         {"spectral_bound", number(e.spectral_bound)},
         {"spectral_gap", number(e.spectral_gap)},
         {"eigenspace_dim", e.eigenspace_dim},
         {"projection_min", number(e.projection_min)},
         {"power_k", e.power_k},
         {"power_agrees", e.power_agrees},
         {"t0_bound", number(e.t0_bound)},
         {"robustness", number(e.robustness)}};
  if (e.dominant.size() > 0) j["dominant"] = std::vector<double>(e.dominant.data(), e.dominant.data() + e.dominant.size());
  return j;
}

json targets_json(const TargetSpec& spec) {
  json a = json::array();
  for (const auto& t : spec) {
    if (t.kind == Target::Kind::PlusInfinity)
      a.push_back("+inf");
    else if (t.kind == Target::Kind::MinusInfinity)
      a.push_back("-inf");
    else
      a.push_back(t.value);
  }
  return a;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::InvalidArgument, "cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

MetricGraph load(const Globals& g) {
  if (!g.catalog.empty()) return catalog_graph(g.catalog);
  if (g.graph_file.empty()) throw Error(ErrorCode::InvalidArgument, "one of --graph or --catalog is required");
  return validate(load_graph_file(g.graph_file));
}

ClassifierConfig classifier(const Globals& g) {
  ClassifierConfig c;
  c.sign_tolerance = g.tol;
  return c;
}

void warn_relations(const MetricGraph& g) {
  for (const auto& r : independence_probe(g.lengths())) {
    const auto& e1 = g.edges()[r.i];
    const auto& e2 = g.edges()[r.j];
    std::fprintf(stderr, "warning: lengths of (%s,%s) and (%s,%s) look rationally related: %lld * L1 = %lld * L2\n",
                 g.names()[e1.u].c_str(), g.names()[e1.v].c_str(), g.names()[e2.u].c_str(), g.names()[e2.v].c_str(), r.q,
                 r.p);
  }
}

void emit(const Globals& g, const json& j) {
  Output out(g.out_file);
  out.stream() << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet-to-Neumann matrices of quantum graphs and positivity of their semigroups"};
  app.require_subcommand(1);
  Globals G;
  auto* graph_opt = app.add_option("--graph", G.graph_file, "graph description (JSON)");
  auto* cat_opt = app.add_option("--catalog", G.catalog, "built-in graph instead of --graph");
  graph_opt->excludes(cat_opt);
  app.add_flag("--assert-independent", G.assert_independent, "assert rational independence of the edge lengths");
  app.add_option("--tol", G.tol, "sign tolerance of the classifier (relative to max |entry|)");
  app.add_option("--out", G.out_file, "write output to FILE instead of stdout");
  app.add_option("--format", G.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* validate_cmd = app.add_subcommand("validate", "check a graph and print its canonical form");
  auto* reduce_cmd = app.add_subcommand("reduce", "print the reduced graph");

  int spec_count = 10, spec_resolution = 64;
  double spec_max = 100.0;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Dirichlet spectrum (all vertices outer) or FEM Kirchhoff spectrum");
  spectrum_cmd->add_option("--count", spec_count, "number of FEM eigenvalues");
  spectrum_cmd->add_option("--resolution", spec_resolution, "FEM elements per unit length");
  spectrum_cmd->add_option("--lambda-max", spec_max, "upper bound for the closed-form spectrum");

  double lambda = 0.0;
  auto* assemble_cmd = app.add_subcommand("assemble", "print D_{lambda, V_outer}");
  assemble_cmd->add_option("--lambda", lambda)->required();
  auto* classify_cmd = app.add_subcommand("classify", "classify the semigroup generated by -D");
  classify_cmd->add_option("--lambda", lambda)->required();

  double from = 0.0, to = 0.0;
  int steps = 0;
  unsigned threads = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "uniform lambda sweep (csv records, json bands)");
  sweep_cmd->add_option("--from", from)->required();
  sweep_cmd->add_option("--to", to)->required();
  sweep_cmd->add_option("--steps", steps)->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");

  int samples = 2000;
  auto* poles_cmd = app.add_subcommand("poles", "locate poles of lambda -> D_{lambda, V_outer}");
  poles_cmd->add_option("--from", from)->required();
  poles_cmd->add_option("--to", to)->required();
  poles_cmd->add_option("--samples", samples);

  double above = 0.0;
  std::uint64_t budget = SearchOptions{}.budget;
  int max_ell = FindOptions{}.max_ell;
  std::vector<CLI::App*> find_cmds;
  const std::pair<const char*, const char*> finders[] = {
      {"find-positive", "lambda above --above with a strongly positive semigroup"},
      {"find-nonpositive", "lambda above --above with a semigroup that is not eventually positive"},
      {"find-eventual", "lambda above --above whose semigroup is eventually strongly positive but not positive"}};
  for (const auto& [name, help] : finders) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("--above", above)->required();
    c->add_option("--budget", budget);
    c->add_option("--max-ell", max_ell);
    find_cmds.push_back(c);
  }

  double mu = 0.0;
  std::vector<long long> p_list;
  auto* comm_cmd = app.add_subcommand("commensurable", "scaling family for commensurable lengths");
  comm_cmd->add_option("--mu", mu)->required();
  comm_cmd->add_option("--p", p_list)->required()->delimiter(',');

  int count = 20;
  double gamma = 1.0;
  auto* limit_cmd = app.add_subcommand("limit", "Kronecker sequence and convergence of D/(l sqrt(lambda))");
  limit_cmd->add_option("--count", count);
  limit_cmd->add_option("--gamma", gamma, "uniform target for every edge");
  limit_cmd->add_option("--budget", budget);

  std::string catalog_name;
  auto* catalog_cmd = app.add_subcommand("catalog", "print a built-in graph (or list them)");
  catalog_cmd->add_option("name", catalog_name);

  CLI11_PARSE(app, argc, argv);

  try {
    if (catalog_cmd->parsed()) {
      if (catalog_name.empty()) {
        Output out(G.out_file);
        for (const auto& n : catalog_names()) out.stream() << n << "\n";
      } else {
        Output out(G.out_file);
        out.stream() << graph_to_json(catalog_graph(catalog_name)) << "\n";
      }
      return kOk;
    }

    const MetricGraph g = load(G);
    const ClassifierConfig cfg = classifier(G);

    if (validate_cmd->parsed()) {
      json comps = json::array();
      for (const auto& c : g.inner_components()) {
        json names = json::array();
        for (Index i : c) names.push_back(g.names()[i]);
        comps.push_back(names);
      }
      json j = json::parse(graph_to_json(g));
      j["valid"] = true;
      j["inner_components"] = comps;
      emit(G, j);
      return kOk;
    }

    if (reduce_cmd->parsed()) {
      const ReducedGraph r = reduced_graph(g);
      json edges = json::array();
      for (const auto& e : r.edges) {
        const char* kind = e.kind == ReducedEdgeKind::Direct ? "direct" : e.kind == ReducedEdgeKind::ThroughInner ? "through-inner" : "both";
        edges.push_back({{"u", r.names[e.r]}, {"v", r.names[e.s]}, {"kind", kind}});
      }
      emit(G, {{"vertices", r.names}, {"edges", edges}, {"tree", is_tree(r)}, {"has_cycle", has_cycle(r)}});
      return kOk;
    }

    if (spectrum_cmd->parsed()) {
      const SpectrumList s = g.inner_count() == 0 ? dirichlet_spectrum_full(g, spec_max)
                                                  : kirchhoff_spectrum(g, spec_count, spec_resolution);
      if (G.format == "json") {
        emit(G, {{"values", s.values}, {"multiplicity", s.multiplicity}, {"kind", to_string(s.kind)}});
      } else {
        Output out(G.out_file);
        out.stream() << "index,lambda,kind\n";
        for (std::size_t i = 0; i < s.values.size(); ++i)
          out.stream() << i + 1 << "," << format_double(s.values[i]) << "," << to_string(s.kind) << "\n";
      }
      return kOk;
    }

    if (assemble_cmd->parsed()) {
      const DtnMatrix d = assemble_outer(g, lambda);
      if (G.format == "csv") {
        Output out(G.out_file);
        for (Eigen::Index i = 0; i < d.entries.rows(); ++i) {
          for (Eigen::Index k = 0; k < d.entries.cols(); ++k)
            out.stream() << (k ? "," : "") << format_double(d.entries(i, k));
          out.stream() << "\n";
        }
      } else {
        std::vector<std::string> outer(g.names().begin(), g.names().begin() + static_cast<long>(g.outer_count()));
        emit(G, {{"lambda", lambda},
                 {"vertices", outer},
                 {"provenance", d.provenance == Provenance::Direct ? "direct" : "schur"},
                 {"eliminated", d.eliminated},
                 {"matrix", matrix_json(d.entries)}});
      }
      return kOk;
    }

    if (classify_cmd->parsed()) {
      json j{{"lambda", lambda}};
      int code = kOk;
      try {
        const SemigroupClass c = classify(assemble_outer(g, lambda).entries, cfg);
        j["verdict"] = to_string(c.verdict);
        j["evidence"] = evidence_json(c.evidence);
        if (c.verdict == Verdict::Marginal) code = kMarginal;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::AtPole && e.code() != ErrorCode::InnerBlockSingular) throw;
        j["verdict"] = to_string(Verdict::Pole);
        j["error"] = e.what();
        code = kMarginal;
      }
      emit(G, j);
      return code;
    }

    if (sweep_cmd->parsed()) {
      const auto records = sweep(g, from, to, steps, cfg, threads);
      Output out(G.out_file);
      if (G.format == "json")
        out.stream() << bands_to_json(report(records)) << "\n";
      else
        write_sweep_csv(out.stream(), records);
      return kOk;
    }

    if (poles_cmd->parsed()) {
      json a = json::array();
      for (const auto& p : pole_scan(g, from, to, samples)) a.push_back({{"lambda", p.lambda}, {"width", p.width}});
      emit(G, a);
      return kOk;
    }

    for (std::size_t k = 0; k < find_cmds.size(); ++k) {
      if (!find_cmds[k]->parsed()) continue;
      if (G.assert_independent) warn_relations(g);
      FindOptions opts;
      opts.search.assert_independent = G.assert_independent;
      opts.search.budget = budget;
      opts.classifier = cfg;
      opts.max_ell = max_ell;
      const FoundLambda f = k == 0   ? find_strongly_positive_above(g, above, opts)
                            : k == 1 ? find_not_eventually_positive_above(g, above, opts)
                                     : find_eventual_not_positive_above(g, above, opts);
      emit(G, {{"lambda", f.lambda},
               {"verdict", to_string(f.classification.verdict)},
               {"residuals", {{"sin", f.sin_residual}, {"cos", f.cos_residual}}},
               {"budget_used", f.budget_used},
               {"ell", f.ell},
               {"targets", targets_json(f.targets)},
               {"construction", f.construction},
               {"evidence", evidence_json(f.classification.evidence)}});
      return kOk;
    }

    if (comm_cmd->parsed()) {
      const CommensurableFamily fam = commensurable_family(g, mu, p_list, cfg);
      json members = json::array();
      for (const auto& m : fam.members)
        members.push_back({{"p", m.p},
                           {"lambda", m.lambda},
                           {"verdict", to_string(m.classification.verdict)},
                           {"scaling_error", m.scaling_error}});
      emit(G, {{"base", fam.lengths.base},
               {"multiples", fam.lengths.multiples},
               {"mu", fam.mu},
               {"lambda1", fam.lambda1},
               {"members", members}});
      return kOk;
    }

    if (limit_cmd->parsed()) {
      if (G.assert_independent) warn_relations(g);
      SearchOptions opts;
      opts.assert_independent = G.assert_independent;
      opts.budget = budget;
      const TargetSpec spec = uniform_targets(g.edges().size(), gamma);
      const KroneckerSequence seq = kronecker_sequence(g.lengths(), spec, count, opts);
      const LimitReport rep = verify_limit(g, spec, seq);
      json steps_json = json::array();
      for (std::size_t i = 0; i < rep.ells.size(); ++i) steps_json.push_back({{"ell", rep.ells[i]}, {"error", rep.errors[i]}});
      json lambdas = json::array();
      for (const auto& st : seq.steps) lambdas.push_back({{"ell", st.ell}, {"lambda", st.lambda}});
      emit(G, {{"limit", matrix_json(limit_matrix_Q(g.topology(), spec))},
               {"sequence", lambdas},
               {"errors", steps_json},
               {"skipped_at_pole", rep.skipped_at_pole},
               {"initial_error", rep.initial_error},
               {"final_error", rep.final_error},
               {"decreasing", rep.decreasing},
               {"budget_used", seq.budget_used}});
      return kOk;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
  return kOk;
}
