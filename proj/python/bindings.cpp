#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qgdtn/catalog.hpp"
#include "qgdtn/dtn.hpp"
#include "qgdtn/error.hpp"
#include "qgdtn/graph_io.hpp"
#include "qgdtn/lambda_search.hpp"
#include "qgdtn/matrix_exp.hpp"
#include "qgdtn/metric_graph.hpp"
#include "qgdtn/positivity.hpp"
#include "qgdtn/spectra.hpp"
#include "qgdtn/sweep.hpp"

namespace py = pybind11;
using namespace qgdtn;

namespace {

MetricGraph graph_from(const std::vector<std::string>& vertices,
                       const std::vector<std::tuple<std::string, std::string, double>>& edges,
                       const std::vector<std::string>& outer) {
  RawGraph raw;
  raw.vertices = vertices;
  for (const auto& [u, v, L] : edges) raw.edges.push_back({u, v, L});
  raw.outer = outer;
  return validate(raw);
}

TargetSpec targets_from(const py::object& obj, std::size_t edges) {
  if (py::isinstance<py::float_>(obj) || py::isinstance<py::int_>(obj)) return uniform_targets(edges, obj.cast<double>());
  return obj.cast<TargetSpec>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dirichlet-to-Neumann matrices of quantum graphs and positivity of their semigroups";

  py::enum_<ErrorCode> code(m, "ErrorCode");
  for (ErrorCode c : {ErrorCode::ParseError, ErrorCode::NotSimple, ErrorCode::Disconnected, ErrorCode::NonPositiveLength,
                      ErrorCode::EmptyOuterSet, ErrorCode::UnknownVertex, ErrorCode::AtPole, ErrorCode::InnerBlockSingular,
                      ErrorCode::PatternViolation, ErrorCode::PoleCluster, ErrorCode::ResolutionTooLow,
                      ErrorCode::IndependenceNotAsserted, ErrorCode::BudgetExhausted, ErrorCode::NoCycle,
                      ErrorCode::NotCommensurable, ErrorCode::MuOutOfRange, ErrorCode::PreconditionFailed,
                      ErrorCode::InvalidArgument})
    code.value(std::string(to_string(c)).c_str(), c);

  static py::exception<Error> exc(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(exc.ptr())(e.what());
      err.attr("code") = py::cast(e.code());
      PyErr_SetObject(exc.ptr(), err.ptr());
    }
  });

  // graphs
  py::class_<Edge>(m, "Edge")
      .def_readonly("u", &Edge::u)
      .def_readonly("v", &Edge::v)
      .def_readonly("length", &Edge::length)
      .def("__repr__", [](const Edge& e) {
        std::ostringstream os;
        os << "Edge(" << e.u << ", " << e.v << ", " << e.length << ")";
        return os.str();
      });

  py::class_<MetricGraph>(m, "MetricGraph")
      .def(py::init(&graph_from), py::arg("vertices"), py::arg("edges"), py::arg("outer"))
      .def_property_readonly("names", &MetricGraph::names)
      .def_property_readonly("edges", &MetricGraph::edges)
      .def_property_readonly("vertex_count", &MetricGraph::vertex_count)
      .def_property_readonly("outer_count", &MetricGraph::outer_count)
      .def_property_readonly("inner_count", &MetricGraph::inner_count)
      .def_property_readonly("outer_components", &MetricGraph::outer_components)
      .def_property_readonly("inner_components", &MetricGraph::inner_components)
      .def("lengths", &MetricGraph::lengths)
      .def("index_of", &MetricGraph::index_of)
      .def("with_outer", &MetricGraph::with_outer)
      .def("to_json", [](const MetricGraph& g) { return graph_to_json(g); })
      .def("__repr__", [](const MetricGraph& g) {
        std::ostringstream os;
        os << "MetricGraph(" << g.vertex_count() << " vertices, " << g.edges().size() << " edges, " << g.outer_count()
           << " outer)";
        return os.str();
      });

  py::enum_<ReducedEdgeKind>(m, "ReducedEdgeKind")
      .value("Direct", ReducedEdgeKind::Direct)
      .value("ThroughInner", ReducedEdgeKind::ThroughInner)
      .value("Both", ReducedEdgeKind::Both);

  py::class_<ReducedEdge>(m, "ReducedEdge")
      .def_readonly("r", &ReducedEdge::r)
      .def_readonly("s", &ReducedEdge::s)
      .def_readonly("kind", &ReducedEdge::kind);

  py::class_<ReducedGraph>(m, "ReducedGraph")
      .def_readonly("names", &ReducedGraph::names)
      .def_readonly("edges", &ReducedGraph::edges)
      .def("has_edge", &ReducedGraph::has_edge)
      .def("is_tree", [](const ReducedGraph& r) { return is_tree(r); })
      .def("has_cycle", [](const ReducedGraph& r) { return has_cycle(r); });

  m.def("reduced_graph", &reduced_graph);
  m.def("graph_from_json", [](const std::string& text) { return validate(parse_graph_json(text)); });
  m.def("load_graph", [](const std::string& path) { return validate(load_graph_file(path)); });
  m.def("parse_length_expr", &parse_length_expr);
  m.def("catalog_graph", &catalog_graph);
  m.def("catalog_names", &catalog_names);
  m.def("interval_graph", &interval_graph);

  // assembly
  py::class_<EdgeCoefficients>(m, "EdgeCoefficients")
      .def_readonly("alpha", &EdgeCoefficients::alpha)
      .def_readonly("beta", &EdgeCoefficients::beta)
      .def_readonly("at_pole", &EdgeCoefficients::at_pole);

  py::enum_<Provenance>(m, "Provenance").value("Direct", Provenance::Direct).value("Schur", Provenance::Schur);

  py::class_<DtnMatrix>(m, "DtnMatrix")
      .def_readonly("lambda_", &DtnMatrix::lambda)
      .def_readonly("entries", &DtnMatrix::entries)
      .def_readonly("provenance", &DtnMatrix::provenance)
      .def_readonly("eliminated", &DtnMatrix::eliminated);

  m.def("edge_coefficients", &edge_coefficients, py::arg("lambda_"), py::arg("length"));
  m.def("edge_alpha_beta", &edge_alpha_beta, py::arg("lambda_"), py::arg("length"));
  m.def("is_edge_pole", &is_edge_pole, py::arg("lambda_"), py::arg("length"));
  m.def("assemble_full", &assemble_full, py::arg("graph"), py::arg("lambda_"));
  m.def("assemble_outer", &assemble_outer, py::arg("graph"), py::arg("lambda_"));
  m.def("schur_reduce", &schur_reduce, py::arg("full"), py::arg("m"));
  m.def("pole_residue_probe", &pole_residue_probe, py::arg("graph"), py::arg("k"), py::arg("edge") = 0);
  m.def("pole_residue_exact", &pole_residue_exact, py::arg("length"), py::arg("k"));

  // spectra
  py::enum_<SpectrumKind>(m, "SpectrumKind")
      .value("ClosedForm", SpectrumKind::ClosedForm)
      .value("Discretized", SpectrumKind::Discretized);

  py::class_<SpectrumList>(m, "SpectrumList")
      .def_readonly("values", &SpectrumList::values)
      .def_readonly("multiplicity", &SpectrumList::multiplicity)
      .def_readonly("kind", &SpectrumList::kind)
      .def_readonly("resolution", &SpectrumList::resolution);

  py::class_<PoleEstimate>(m, "PoleEstimate")
      .def_readonly("lambda_", &PoleEstimate::lambda)
      .def_readonly("width", &PoleEstimate::width);

  m.def("dirichlet_spectrum_full", &dirichlet_spectrum_full, py::arg("graph"), py::arg("lambda_max"));
  m.def("kirchhoff_spectrum", &kirchhoff_spectrum, py::arg("graph"), py::arg("count"), py::arg("resolution") = 32);
  m.def("fem_eigenvalues", &fem_eigenvalues, py::arg("graph"), py::arg("count"), py::arg("resolution"));
  m.def("lambda1_outer", &lambda1_outer, py::arg("graph"), py::arg("resolution") = 32);
  m.def("pole_scan", &pole_scan, py::arg("graph"), py::arg("lo"), py::arg("hi"), py::arg("samples"));

  // positivity
  py::enum_<Verdict>(m, "Verdict")
      .value("Strong", Verdict::Strong)
      .value("Positive", Verdict::Positive)
      .value("Eventual", Verdict::Eventual)
      .value("None_", Verdict::None)
      .value("Marginal", Verdict::Marginal)
      .value("Pole", Verdict::Pole);
  m.def("verdict_name", [](Verdict v) { return to_string(v); });
  m.def("verdict_from_string", &verdict_from_string);

  py::class_<ClassifierConfig>(m, "ClassifierConfig")
      .def(py::init<>())
      .def_readwrite("sign_tolerance", &ClassifierConfig::sign_tolerance)
      .def_readwrite("oracle_times", &ClassifierConfig::oracle_times)
      .def_readwrite("power_k_max", &ClassifierConfig::power_k_max);

  py::class_<MetzlerCheck>(m, "MetzlerCheck")
      .def_readonly("metzler", &MetzlerCheck::metzler)
      .def_readonly("margin", &MetzlerCheck::margin);

  py::class_<Evidence>(m, "Evidence")
      .def_readonly("metzler_margin", &Evidence::metzler_margin)
      .def_readonly("irreducible", &Evidence::irreducible)
      .def_readonly("spectral_bound", &Evidence::spectral_bound)
      .def_readonly("spectral_gap", &Evidence::spectral_gap)
      .def_readonly("eigenspace_dim", &Evidence::eigenspace_dim)
      .def_readonly("projection_min", &Evidence::projection_min)
      .def_readonly("dominant", &Evidence::dominant)
      .def_readonly("power_k", &Evidence::power_k)
      .def_readonly("power_agrees", &Evidence::power_agrees)
      .def_readonly("t0_bound", &Evidence::t0_bound)
      .def_readonly("robustness", &Evidence::robustness)
      .def_readonly("criterion", &Evidence::criterion);

  py::class_<SemigroupClass>(m, "SemigroupClass")
      .def_readonly("verdict", &SemigroupClass::verdict)
      .def_readonly("evidence", &SemigroupClass::evidence);

  py::enum_<OracleClass>(m, "OracleClass")
      .value("AllStrict", OracleClass::AllStrict)
      .value("AllNonneg", OracleClass::AllNonneg)
      .value("EventuallyStrict", OracleClass::EventuallyStrict)
      .value("NotPositiveAtHorizon", OracleClass::NotPositiveAtHorizon);

  py::class_<OracleResult>(m, "OracleResult")
      .def_readonly("observed", &OracleResult::observed)
      .def_readonly("times", &OracleResult::times)
      .def_readonly("min_entry", &OracleResult::min_entry)
      .def_readonly("first_positive_time", &OracleResult::first_positive_time)
      .def_readonly("horizon", &OracleResult::horizon);

  py::class_<GroupProbe>(m, "GroupProbe")
      .def_readonly("group_positive", &GroupProbe::group_positive)
      .def_readonly("is_diagonal", &GroupProbe::is_diagonal)
      .def_readonly("implication_holds", &GroupProbe::implication_holds);

  m.def("is_metzler", &is_metzler, py::arg("neg_m"), py::arg("config") = ClassifierConfig{});
  m.def("is_irreducible", &is_irreducible, py::arg("m"), py::arg("config") = ClassifierConfig{});
  m.def("classify", &classify, py::arg("m"), py::arg("config") = ClassifierConfig{});
  m.def("expm_oracle", &expm_oracle, py::arg("m"), py::arg("config") = ClassifierConfig{});
  m.def("oracle_verdict", &oracle_verdict);
  m.def("group_positivity_probe", &group_positivity_probe, py::arg("m"), py::arg("config") = ClassifierConfig{});
  m.def("expm", &expm);
  m.def("expm_normalized", [](const Eigen::MatrixXd& A) {
    double log_scale = 0.0;
    Eigen::MatrixXd E = expm_normalized(A, &log_scale);
    return py::make_tuple(E, log_scale);
  });

  // searches
  py::class_<Target> target(m, "Target");
  py::enum_<Target::Kind>(target, "Kind")
      .value("Finite", Target::Kind::Finite)
      .value("PlusInfinity", Target::Kind::PlusInfinity)
      .value("MinusInfinity", Target::Kind::MinusInfinity);
  target.def_readwrite("kind", &Target::kind)
      .def_readwrite("value", &Target::value)
      .def_readwrite("zero_sign", &Target::zero_sign)
      .def_static("finite", &Target::finite)
      .def_static("plus_infinity", &Target::plus_infinity)
      .def_static("minus_infinity", &Target::minus_infinity)
      .def("at_step", &Target::at_step)
      .def("inverse", &Target::inverse);
  m.def("uniform_targets", &uniform_targets, py::arg("edges"), py::arg("gamma"));

  py::class_<SearchOptions>(m, "SearchOptions")
      .def(py::init<>())
      .def_readwrite("assert_independent", &SearchOptions::assert_independent)
      .def_readwrite("budget", &SearchOptions::budget)
      .def_readwrite("window_fraction", &SearchOptions::window_fraction)
      .def_readwrite("mu_start", &SearchOptions::mu_start);

  py::class_<KroneckerStep>(m, "KroneckerStep")
      .def_readonly("ell", &KroneckerStep::ell)
      .def_readonly("lambda_", &KroneckerStep::lambda)
      .def_property_readonly("mu", [](const KroneckerStep& s) { return static_cast<double>(s.mu); })
      .def_readonly("sin_residual", &KroneckerStep::sin_residual)
      .def_readonly("cos_residual", &KroneckerStep::cos_residual);

  py::class_<KroneckerSequence>(m, "KroneckerSequence")
      .def_readonly("steps", &KroneckerSequence::steps)
      .def_readonly("skipped", &KroneckerSequence::skipped)
      .def_readonly("budget_used", &KroneckerSequence::budget_used);

  m.def(
      "kronecker_sequence",
      [](const std::vector<double>& lengths, const py::object& targets, int count, const SearchOptions& opts) {
        return kronecker_sequence(lengths, targets_from(targets, lengths.size()), count, opts);
      },
      py::arg("lengths"), py::arg("targets"), py::arg("count"), py::arg("options") = SearchOptions{});

  py::class_<LengthRelation>(m, "LengthRelation")
      .def_readonly("i", &LengthRelation::i)
      .def_readonly("j", &LengthRelation::j)
      .def_readonly("p", &LengthRelation::p)
      .def_readonly("q", &LengthRelation::q);
  m.def("independence_probe", &independence_probe);

  m.def("limit_matrix_outer", [](const MetricGraph& g, const py::object& targets) {
    return limit_matrix_outer(g, targets_from(targets, g.edges().size()));
  });

  py::class_<LimitReport>(m, "LimitReport")
      .def_readonly("ells", &LimitReport::ells)
      .def_readonly("errors", &LimitReport::errors)
      .def_readonly("skipped_at_pole", &LimitReport::skipped_at_pole)
      .def_readonly("initial_error", &LimitReport::initial_error)
      .def_readonly("final_error", &LimitReport::final_error)
      .def_readonly("decreasing", &LimitReport::decreasing);
  m.def("verify_limit", [](const MetricGraph& g, const py::object& targets, const KroneckerSequence& seq) {
    return verify_limit(g, targets_from(targets, g.edges().size()), seq);
  });

  py::class_<FindOptions>(m, "FindOptions")
      .def(py::init<>())
      .def_readwrite("search", &FindOptions::search)
      .def_readwrite("classifier", &FindOptions::classifier)
      .def_readwrite("max_ell", &FindOptions::max_ell);

  py::class_<FoundLambda>(m, "FoundLambda")
      .def_readonly("lambda_", &FoundLambda::lambda)
      .def_readonly("classification", &FoundLambda::classification)
      .def_readonly("ell", &FoundLambda::ell)
      .def_readonly("sin_residual", &FoundLambda::sin_residual)
      .def_readonly("cos_residual", &FoundLambda::cos_residual)
      .def_readonly("budget_used", &FoundLambda::budget_used)
      .def_readonly("targets", &FoundLambda::targets)
      .def_readonly("construction", &FoundLambda::construction);

  m.def("find_strongly_positive_above", &find_strongly_positive_above, py::arg("graph"), py::arg("lambda_hat"),
        py::arg("options") = FindOptions{});
  m.def("find_not_eventually_positive_above", &find_not_eventually_positive_above, py::arg("graph"),
        py::arg("lambda_hat"), py::arg("options") = FindOptions{});
  m.def("find_eventual_not_positive_above", &find_eventual_not_positive_above, py::arg("graph"), py::arg("lambda_hat"),
        py::arg("options") = FindOptions{});

  py::class_<Commensurability>(m, "Commensurability")
      .def_readonly("base", &Commensurability::base)
      .def_readonly("multiples", &Commensurability::multiples);
  m.def("detect_commensurable", &detect_commensurable);

  py::class_<CommensurableMember>(m, "CommensurableMember")
      .def_readonly("p", &CommensurableMember::p)
      .def_readonly("lambda_", &CommensurableMember::lambda)
      .def_readonly("classification", &CommensurableMember::classification)
      .def_readonly("scaling_error", &CommensurableMember::scaling_error);

  py::class_<CommensurableFamily>(m, "CommensurableFamily")
      .def_readonly("lengths", &CommensurableFamily::lengths)
      .def_readonly("mu", &CommensurableFamily::mu)
      .def_readonly("lambda1", &CommensurableFamily::lambda1)
      .def_readonly("members", &CommensurableFamily::members);
  m.def("commensurable_family", &commensurable_family, py::arg("graph"), py::arg("mu"), py::arg("p_list"),
        py::arg("config") = ClassifierConfig{});

  // sweeps
  py::class_<SweepRecord>(m, "SweepRecord")
      .def_readonly("lambda_", &SweepRecord::lambda)
      .def_readonly("eigenvalues", &SweepRecord::eigenvalues)
      .def_readonly("verdict", &SweepRecord::verdict)
      .def_readonly("near_pole", &SweepRecord::near_pole)
      .def_readonly("error", &SweepRecord::error);

  py::class_<Band>(m, "Band")
      .def_readonly("lo", &Band::lo)
      .def_readonly("hi", &Band::hi)
      .def_readonly("verdict", &Band::verdict)
      .def_readonly("samples", &Band::samples);

  m.def("sweep", &sweep, py::arg("graph"), py::arg("lo"), py::arg("hi"), py::arg("steps"),
        py::arg("config") = ClassifierConfig{}, py::arg("threads") = 0u, py::call_guard<py::gil_scoped_release>());
  m.def("report", &report);
  m.def("sweep_csv", [](const std::vector<SweepRecord>& recs) {
    std::ostringstream os;
    write_sweep_csv(os, recs);
    return os.str();
  });
}
