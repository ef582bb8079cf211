#include "qgdtn/sweep.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <thread>

#include "qgdtn/dtn.hpp"
#include "qgdtn/error.hpp"

namespace qgdtn {

SweepRecord sweep_sample(const MetricGraph& g, double lambda, const ClassifierConfig& cfg) {
  SweepRecord rec;
  rec.lambda = lambda;
  try {
    const DtnMatrix d = assemble_outer(g, lambda);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.entries, Eigen::EigenvaluesOnly);
    rec.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    rec.verdict = classify(d.entries, cfg).verdict;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::AtPole || e.code() == ErrorCode::InnerBlockSingular) {
      rec.near_pole = true;
      rec.verdict = Verdict::Pole;
    } else {
      rec.verdict = Verdict::Marginal;
      rec.error = e.what();
    }
  }
  return rec;
}

std::vector<SweepRecord> sweep(const MetricGraph& g, double lo, double hi, int steps, const ClassifierConfig& cfg,
                               unsigned threads) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "sweep needs lo < hi");
  if (steps < 2) throw Error(ErrorCode::InvalidArgument, "sweep needs at least 2 steps");
  std::vector<SweepRecord> out(static_cast<std::size_t>(steps));
  auto lambda_at = [&](int i) { return i == steps - 1 ? hi : lo + (hi - lo) * i / (steps - 1); };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(steps));
  if (threads <= 1) {
    for (int i = 0; i < steps; ++i) out[static_cast<std::size_t>(i)] = sweep_sample(g, lambda_at(i), cfg);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (int i = static_cast<int>(t); i < steps; i += static_cast<int>(threads))
        out[static_cast<std::size_t>(i)] = sweep_sample(g, lambda_at(i), cfg);
    });
  for (auto& th : pool) th.join();
  return out;
}

std::vector<Band> report(const std::vector<SweepRecord>& records) {
  std::vector<Band> bands;
  bool open = false;
  for (const auto& r : records) {
    if (r.near_pole || r.verdict == Verdict::Marginal || r.verdict == Verdict::Pole) {
      open = false;
      continue;
    }
    if (open && bands.back().verdict == r.verdict) {
      bands.back().hi = r.lambda;
      ++bands.back().samples;
    } else {
      bands.push_back({r.lambda, r.lambda, r.verdict, 1});
      open = true;
    }
  }
  return bands;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  std::size_t m = 0;
  for (const auto& r : records) m = std::max(m, r.eigenvalues.size());
  out << "lambda";
  for (std::size_t i = 1; i <= m; ++i) out << ",eig_" << i;
  out << ",class,near_pole\n";
  for (const auto& r : records) {
    out << format_double(r.lambda);
    for (std::size_t i = 0; i < m; ++i) out << ',' << (i < r.eigenvalues.size() ? format_double(r.eigenvalues[i]) : "nan");
    out << ',' << to_string(r.verdict) << ',' << (r.near_pole ? "true" : "false") << '\n';
  }
}

std::string bands_to_json(const std::vector<Band>& bands, int indent) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : bands) arr.push_back({{"lo", b.lo}, {"hi", b.hi}, {"class", to_string(b.verdict)}, {"samples", b.samples}});
  return arr.dump(indent);
}

}  // namespace qgdtn
