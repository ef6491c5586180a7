#include "symconv/harness.hpp"

#include "symconv/error.hpp"
#include "symconv/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace symconv {

namespace {

const std::vector<std::pair<Check, std::string>>& check_table() {
  static const std::vector<std::pair<Check, std::string>> t{
      {Check::Main, "main"},       {Check::Kostant, "kostant"},
      {Check::GK, "gk"},           {Check::Hessian, "hessian"},
      {Check::CriticalImage, "critical_image"}, {Check::InclusionCone, "inclusion_cone"},
      {Check::NoLine, "no_line"},  {Check::Limits, "limits"}};
  return t;
}

std::vector<double> stdvec(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }
std::vector<double> stdvec(const QVector& v) { return stdvec(to_eigen(v)); }

double knorm(const Mat& G, const Vec& v) { return std::sqrt(std::max(0.0, v.dot(G * v))); }

// Orthogonal projector on p-coefficients killing the directions reachable inside (h and k) + (h and p).
Mat transverse_projector(const Realization& R, const PositiveSystem& P) {
  const Mat W = permutation_matrix(parabolic_permutation(R, P));
  std::vector<Mat> basis = R.basis_kh;
  basis.insert(basis.end(), R.basis_ph.begin(), R.basis_ph.end());
  const Eigen::Index n = R.n, nk = static_cast<Eigen::Index>(R.basis_kh.size()),
                     np = static_cast<Eigen::Index>(R.basis_ph.size());
  Mat L = Mat::Zero(n * (n - 1) / 2, nk + np);
  for (std::size_t c = 0; c < basis.size(); ++c) {
    Mat B = W.transpose() * basis[c] * W;
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < i; ++j) L(r++, static_cast<Eigen::Index>(c)) = B(i, j);
  }
  Eigen::FullPivLU<Mat> lu(L);
  lu.setThreshold(1e-10);
  Mat ker = lu.kernel().bottomRows(np);
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(ker);
  cod.setThreshold(1e-10);
  Mat Q = Mat(cod.householderQ()).leftCols(cod.rank());
  return Mat::Identity(np, np) - Q * Q.transpose();
}

double angle(const Mat& G, const Vec& u, const Vec& v) {
  double c = u.dot(G * v) / (knorm(G, u) * knorm(G, v));
  return std::acos(std::clamp(c, -1.0, 1.0));
}

std::vector<QVector> nonzero_generators(const Cone& c) {
  std::vector<QVector> out;
  for (const auto& g : c.generators)
    if (!g.is_zero()) out.push_back(g);
  return out;
}

struct Setup {
  Realization R;
  PositiveSystem P;
  QVector a_log;
  double vertex_bound, angle_bound;
};

Setup make_setup(const VerificationConfig& c, bool allow_singular) {
  c.validate();
  Realization R = Realization::preset(c.preset);
  R.validate();
  const auto& d = *R.datum;
  QVector chamber = c.chamber ? *c.chamber : R.base_chamber;
  if (chamber.size() != d.dim()) throw Error(ErrorCode::ConfigError, "chamber vector has wrong dimension");
  std::optional<PositiveSystem> P;
  try {
    P.emplace(R.datum, chamber);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad chamber: ") + e.what());
  }
  PresetDefaults def = preset_defaults(c.preset);
  QVector a_log = c.a_log ? *c.a_log : def.a_log;
  if (a_log.size() != d.dim()) throw Error(ErrorCode::ConfigError, "log a has wrong dimension");
  if (!(d.sigma_on_a() * a_log == -a_log)) throw Error(ErrorCode::ConfigError, "log a is not in a_q");
  if (!allow_singular && !is_regular(d, a_log))
    throw Error(ErrorCode::ConfigError, "log a is singular; only the limits check accepts it");
  return Setup{std::move(R), *P, a_log, c.vertex_bound.value_or(def.vertex_bound), c.angle_bound.value_or(def.angle_bound)};
}

Report base_report(const VerificationConfig& c, const Setup& s) {
  Report r;
  r.preset = c.preset;
  r.seed = c.seed;
  r.a_log = stdvec(s.a_log);
  for (const auto& q : s.R.datum->a_q_basis()) r.aq_basis.push_back(stdvec(q));
  return r;
}

void set_omega(Report& r, const PolyhedralSet& omega) {
  r.omega_vertices.clear();
  r.omega_generators.clear();
  for (const auto& v : omega.vertices()) r.omega_vertices.push_back(stdvec(v));
  for (const auto& g : nonzero_generators(omega.cone())) r.omega_generators.push_back(stdvec(g));
}

std::string fmt(double x) {
  std::ostringstream o;
  o.precision(3);
  o << x;
  return o.str();
}

QVector rounded(const Vec& v, double grid) {
  QVector q(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) q[static_cast<std::size_t>(i)] = from_double(std::round(v(i) / grid)) * from_double(grid);
  return q;
}

}  // namespace

std::string check_name(Check c) {
  for (const auto& [k, n] : check_table())
    if (k == c) return n;
  return "?";
}

Check parse_check(const std::string& s) {
  for (const auto& [k, n] : check_table())
    if (n == s) return k;
  throw Error(ErrorCode::ConfigError, "unknown check " + s);
}

std::vector<Check> all_checks() {
  std::vector<Check> out;
  for (const auto& [k, n] : check_table()) out.push_back(k);
  return out;
}

PresetDefaults preset_defaults(const std::string& preset) {
  if (preset == "kostant_sl2") return PresetDefaults{QVector{1}, 1e-3, 0.05};
  if (preset == "sl2_so11") return PresetDefaults{QVector{1}, 1e-2, 0.05};
  if (preset == "sl3_so21") return PresetDefaults{QVector{ratio(1, 2), ratio(7, 10)}, 1e-2, 0.05};
  if (preset == "group_sl2") return PresetDefaults{QVector{ratio(1, 2), ratio(-1, 2)}, 1e-2, 0.05};
  throw Error(ErrorCode::ConfigError, "unknown preset " + preset);
}

void VerificationConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::ConfigError, m); };
  if (samples == 0) bad("sample count must be positive");
  if (radii.empty()) bad("radius schedule is empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0)) bad("radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) bad("radii must be strictly increasing");
  }
  if (!(tol > 0)) bad("tolerance must be positive");
  if (hessian_X == 0 || pattern_X == 0) bad("counts must be positive");
  if (sampling.std_k < 0 || sampling.std_p < 0) bad("sampling deviations must be nonnegative");
  preset_defaults(preset);
}

void CheckResult::fail(const Witness& w, std::size_t max_witnesses) {
  pass = false;
  ++failures;
  if (witnesses.size() < max_witnesses) witnesses.push_back(w);
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

Report verify_main(const VerificationConfig& c) {
  Setup s = make_setup(c, false);
  const auto& R = s.R;
  const auto& d = *R.datum;
  const Mat G = to_eigen(d.gram());
  Report rep = base_report(c, s);

  const PolyhedralSet omega = symconv::omega(s.a_log, R.w_kh(), gamma_cone(s.P));
  set_omega(rep, omega);
  const auto vertices = omega.vertices();
  const auto gens = nonzero_generators(omega.cone());
  HullProjector hull(vertices, d.gram());
  const Mat a = Vec(R.a_matrix(to_eigen(s.a_log)).diagonal().array().exp()).asDiagonal();

  CheckResult inc{"main.inclusion"}, vert{"main.vertices"}, cov{"main.cone_coverage"}, pre{"main.preimage"};
  const Mat transverse = transverse_projector(R, s.P);
  const double window = 2 * knorm(G, to_eigen(s.a_log)) + 1;
  std::vector<double> best_v(vertices.size(), INFINITY), best_g(gens.size(), INFINITY);
  std::vector<std::pair<double, Vec>> far;  // displacement norms and directions, for the no-line check
  double worst = INFINITY, pdist = 0;
  for (std::size_t ri = 0; ri < c.radii.size(); ++ri) {
    auto hs = sample_H(R, c.radii[ri], c.samples, split_seed(c.seed, ri), c.sampling);
    for (const auto& h : hs) {
      Vec y = h_pq(R, a * h.h, s.P);
      double slack = hrep_slack(omega.hrep(), y);
      worst = std::min(worst, slack);
      ++inc.count;
      if (slack < -c.tol) inc.fail(Witness{stdvec(y), slack, "sample outside Omega"}, c.max_witnesses);
      rep.samples.push_back(SampleRecord{ri, stdvec(y), slack});
      if (knorm(G, y) <= window) {
        pdist = std::max(pdist, (transverse * h.coeff_p).norm());
        ++pre.count;
      }
      for (std::size_t k = 0; k < vertices.size(); ++k)
        best_v[k] = std::min(best_v[k], knorm(G, y - to_eigen(vertices[k])));
      Vec disp = y - hull.project(y);
      double dn = knorm(G, disp);
      if (dn > 1e-6) {
        for (std::size_t k = 0; k < gens.size(); ++k) best_g[k] = std::min(best_g[k], angle(G, disp, to_eigen(gens[k])));
        if (dn > 1) far.emplace_back(dn, disp / dn);
      }
    }
    double vmax = vertices.empty() ? 0 : *std::max_element(best_v.begin(), best_v.end());
    double gmax = gens.empty() ? 0 : *std::max_element(best_g.begin(), best_g.end());
    vert.metrics["vertex_distance.r" + std::to_string(ri)] = vmax;
    pre.metrics["max_distance.r" + std::to_string(ri)] = pdist;
    cov.metrics["angle_gap.r" + std::to_string(ri)] = gmax;
  }
  inc.worst_slack = std::min(0.0, worst);
  inc.metrics["min_slack"] = worst;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    vert.metrics["vertex." + std::to_string(k)] = best_v[k];
    if (!(best_v[k] <= s.vertex_bound))
      vert.fail(Witness{stdvec(vertices[k]), best_v[k], "vertex not approached within " + fmt(s.vertex_bound)},
                c.max_witnesses);
  }
  vert.count = vertices.size();
  for (std::size_t k = 0; k < gens.size(); ++k) {
    cov.metrics["generator." + std::to_string(k)] = best_g[k];
    if (!(best_g[k] <= s.angle_bound))
      cov.fail(Witness{stdvec(gens[k]), best_g[k], "generator not approached within " + fmt(s.angle_bound) + " rad"},
               c.max_witnesses);
  }
  cov.count = gens.size();
  if (gens.empty()) cov.notes.push_back("Gamma(P) = 0");
  vert.metrics["bound"] = s.vertex_bound;
  cov.metrics["bound"] = s.angle_bound;
  pre.metrics["window"] = window;
  pre.notes.push_back("monitored: noncompact sampling coefficient transverse to (h and k) + (h and p), for |h_pq| <= window");
  rep.checks = {inc, vert, cov, pre};

  if (c.checks.count(Check::NoLine)) {
    CheckResult nl{"no_line"};
    std::sort(far.begin(), far.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    if (far.size() > 256) far.resize(256);
    Cone rec{d.dim(), {}};
    for (const auto& [n, dir] : far) rec.generators.push_back(rounded(dir, 1e-9));
    nl.count = rec.generators.size();
    bool pointed = is_pointed(rec);
    bool line = contains_line(omega);
    nl.metrics["directions"] = static_cast<double>(rec.generators.size());
    if (!pointed) nl.fail(Witness{{}, 0, "sampled recession directions are not pointed"}, c.max_witnesses);
    if (line) nl.fail(Witness{{}, 0, "Omega contains a line"}, c.max_witnesses);
    rep.checks.push_back(nl);
  }

  if (c.checks.count(Check::InclusionCone)) {
    CheckResult ic{"inclusion_cone"};
    Cone cone = gamma_aq(d, s.P.sigmatheta_part());
    PolyhedralSet target({QVector(d.dim())}, cone);
    auto hs = sample_H(R, c.radii.back(), c.samples, split_seed(c.seed, 1000), c.sampling);
    double w = INFINITY;
    for (const auto& h : hs) {
      Vec y = h_pq(R, h.h, s.P);
      double slack = hrep_slack(target.hrep(), y);
      w = std::min(w, slack);
      ++ic.count;
      if (slack < -c.tol) ic.fail(Witness{stdvec(y), slack, "H_{P,q}(h) outside Gamma_{a_q}(Sigma(P, sigma theta))"}, c.max_witnesses);
    }
    ic.worst_slack = std::min(0.0, w);
    ic.metrics["min_slack"] = w;
    rep.checks.push_back(ic);
  }
  return rep;
}

Report verify_limits(const VerificationConfig& c) {
  Setup s = make_setup(c, true);
  const auto& R = s.R;
  const auto& d = *R.datum;
  Report rep = base_report(c, s);
  CheckResult res{"limits"};
  const QVector delta = preset_defaults(c.preset).a_log;
  const WeylGroup& W = R.w_kh();
  const Cone gamma = gamma_cone(s.P);
  const PolyhedralSet omega_a = omega(s.a_log, W, gamma);
  set_omega(rep, omega_a);
  auto hs = sample_H(R, c.radii.back(), c.samples, split_seed(c.seed, 0), c.sampling);
  auto group = [&](const QVector& x) {
    return Mat(Vec(R.a_matrix(to_eigen(x)).diagonal().array().exp()).asDiagonal());
  };
  const double dnorm = to_eigen(delta).norm();
  res.notes.push_back(std::string("log a is ") + (is_regular(d, s.a_log) ? "regular" : "singular"));
  for (int j = 1; j <= 6; ++j) {
    QVector aj = s.a_log + ratio(1, 1L << j) * delta;
    if (!is_regular(d, aj)) continue;
    const PolyhedralSet omega_j = omega(aj, W, gamma);
    const double eps = std::ldexp(1.0, -j);
    double worst_j = INFINITY, excess = 0;
    for (const auto& h : hs) {
      Vec y = h_pq(R, group(aj) * h.h, s.P);
      double sj = hrep_slack(omega_j.hrep(), y);
      worst_j = std::min(worst_j, sj);
      ++res.count;
      if (sj < -c.tol) res.fail(Witness{stdvec(y), sj, "outside Omega(a_j), j=" + std::to_string(j)}, c.max_witnesses);
      excess = std::max(excess, -hrep_slack(omega_a.hrep(), y));
    }
    res.metrics["slack.j" + std::to_string(j)] = worst_j;
    res.metrics["excess.j" + std::to_string(j)] = excess;
    if (excess > eps * dnorm + c.tol)
      res.fail(Witness{stdvec(aj), excess, "image at a_j farther from Omega(a) than |log a_j - log a|"}, c.max_witnesses);
  }
  double worst = INFINITY;
  for (const auto& h : hs) {
    Vec y = h_pq(R, group(s.a_log) * h.h, s.P);
    double sl = hrep_slack(omega_a.hrep(), y);
    worst = std::min(worst, sl);
    ++res.count;
    if (sl < -c.tol) res.fail(Witness{stdvec(y), sl, "outside Omega(a)"}, c.max_witnesses);
  }
  res.metrics["slack.limit"] = worst;
  res.worst_slack = std::min(0.0, worst);
  rep.checks.push_back(res);
  return rep;
}

Report verify_gk(const VerificationConfig& c) {
  Setup s = make_setup(c, true);
  const auto& R = s.R;
  const auto& d = *R.datum;
  const Mat G = to_eigen(d.gram());
  Report rep = base_report(c, s);
  CheckResult res{"gk"}, cf{"gk.closed_form"};
  auto systems = enumerate_positive_systems(R.datum, R.base_chamber);
  std::mt19937_64 rng(split_seed(c.seed, 77));
  double worst = INFINITY, gap = 0;
  std::size_t pair_index = 0;
  for (const auto& P : systems)
    for (const auto& Q : systems) {
      ++pair_index;
      Cone cone = gk_cone(P, Q);
      PolyhedralSet target({QVector(d.dim())}, cone);
      auto gens = nonzero_generators(cone);
      std::vector<double> best(gens.size(), INFINITY);
      for (std::size_t k = 0; k < c.samples; ++k) {
        Mat x = sample_gk(R, P, Q, c.radii.back(), rng);
        Vec H = gk_sample(R, P, Q, x);
        double sl = hrep_slack(target.hrep(), H);
        worst = std::min(worst, sl);
        ++res.count;
        if (sl < -c.tol)
          res.fail(Witness{stdvec(H), sl, "pair " + std::to_string(pair_index) + " outside the cone"}, c.max_witnesses);
        if (knorm(G, H) > 1e-9)
          for (std::size_t g = 0; g < gens.size(); ++g) best[g] = std::min(best[g], angle(G, H, to_eigen(gens[g])));
      }
      for (std::size_t g = 0; g < gens.size(); ++g) {
        gap = std::max(gap, best[g]);
        if (!(best[g] <= s.angle_bound))
          res.fail(Witness{stdvec(gens[g]), best[g], "pair " + std::to_string(pair_index) + " generator not approached"},
                   c.max_witnesses);
      }
    }
  res.worst_slack = std::min(0.0, worst);
  res.metrics["min_slack"] = worst;
  res.metrics["angle_gap"] = gap;
  res.metrics["pairs"] = static_cast<double>(pair_index);
  rep.checks.push_back(res);

  if (d.dim() == 1) {
    // rank one: H_P(exp(x Y_{-alpha})) = (1/2) log(1 + x^2) H_alpha
    const PositiveSystem P = R.base_parabolic();
    const PositiveSystem Q = P.opposite();
    double err = 0;
    for (int i = 0; i <= 2000; ++i) {
      double x = -10 + 0.01 * i;
      Mat n = Mat::Identity(R.n, R.n);
      for (auto k : gk_roots(P, Q))
        for (const auto& u : R.root_units[d.negative(k)]) n(u.row, u.col) = x;
      Vec H = gk_sample(R, P, Q, n);
      err = std::max(err, std::abs(H(0) - 0.5 * std::log1p(x * x)));
      ++cf.count;
    }
    cf.metrics["max_error"] = err;
    if (!(err <= 1e-12)) cf.fail(Witness{{}, err, "closed form deviates"}, c.max_witnesses);
  } else {
    cf.skipped = true;
    cf.notes.push_back("closed form only for rank one");
  }
  rep.checks.push_back(cf);
  return rep;
}

CheckResult check_closed_form(const VerificationConfig& c) {
  CheckResult res{"kostant"};
  if (c.preset != "kostant_sl2" && c.preset != "sl2_so11") {
    res.skipped = true;
    res.notes.push_back("closed form only for the SL(2) presets");
    return res;
  }
  Setup s = make_setup(c, true);
  const auto& R = s.R;
  const PositiveSystem& P = s.P;
  if (!(P == R.base_parabolic())) {
    res.skipped = true;
    res.notes.push_back("closed form stated for the base positive system");
    return res;
  }
  auto diag = [&](double t) {
    Mat a = Mat::Zero(2, 2);
    a(0, 0) = std::exp(t);
    a(1, 1) = std::exp(-t);
    return a;
  };
  if (c.preset == "kostant_sl2") {
    const double t = s.a_log[0].get_d();
    double err = 0, lo = INFINITY, hi = -INFINITY, endpoint = 0;
    std::vector<double> vals;
    for (int i = 0; i < 1000; ++i) {
      double phi = 2 * std::numbers::pi * i / 1000;
      Mat k(2, 2);
      k << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
      double H = iwasawa_H(R, diag(t) * k, P)(0);
      double cf = 0.5 * std::log(std::exp(2 * t) * std::cos(phi) * std::cos(phi) +
                                 std::exp(-2 * t) * std::sin(phi) * std::sin(phi));
      err = std::max(err, std::abs(H - cf));
      lo = std::min(lo, H);
      hi = std::max(hi, H);
      vals.push_back(H);
      if (i == 0) endpoint = std::max(endpoint, std::abs(H - t));
      if (i == 250) endpoint = std::max(endpoint, std::abs(H + t));
      ++res.count;
    }
    std::sort(vals.begin(), vals.end());
    double gapmax = 0;
    for (std::size_t i = 1; i < vals.size(); ++i) gapmax = std::max(gapmax, vals[i] - vals[i - 1]);
    res.metrics["max_error"] = err;
    res.metrics["endpoint_error"] = endpoint;
    res.metrics["min"] = lo;
    res.metrics["max"] = hi;
    res.metrics["max_gap"] = gapmax;
    if (!(err <= 1e-12)) res.fail(Witness{{}, err, "closed form deviates"}, c.max_witnesses);
    if (!(endpoint <= 1e-12)) res.fail(Witness{{}, endpoint, "endpoints not attained"}, c.max_witnesses);
    if (lo < -std::abs(t) - 1e-12 || hi > std::abs(t) + 1e-12) res.fail(Witness{{lo, hi}, 0, "value outside [-t, t]"}, c.max_witnesses);
    if (!(gapmax <= 0.02 * std::max(1.0, 2 * std::abs(t)))) res.fail(Witness{{}, gapmax, "segment not filled"}, c.max_witnesses);
  } else {
    double err = 0, below = 0, at0 = 0;
    for (double t : {-1.0, 0.0, 1.0}) {
      for (int i = 0; i <= 1000; ++i) {
        double sv = -5 + 0.01 * i;
        Mat h(2, 2);
        h << std::cosh(sv), std::sinh(sv), std::sinh(sv), std::cosh(sv);
        double r = h_pq(R, diag(t) * h, P)(0);
        double cf = 0.5 * std::log(std::exp(2 * t) + 2 * std::cosh(2 * t) * std::sinh(sv) * std::sinh(sv));
        err = std::max(err, std::abs(r - cf) / std::max(1.0, std::abs(cf)));
        below = std::max(below, t - r);
        if (i == 500) at0 = std::max(at0, std::abs(r - t));
        ++res.count;
      }
    }
    res.metrics["max_rel_error"] = err;
    res.metrics["max_below_t"] = below;
    res.metrics["error_at_s0"] = at0;
    if (!(err <= 1e-12)) res.fail(Witness{{}, err, "closed form deviates"}, c.max_witnesses);
    if (below > 1e-12) res.fail(Witness{{}, below, "sample below log a"}, c.max_witnesses);
    if (!(at0 <= 1e-12)) res.fail(Witness{{}, at0, "minimum not attained at s = 0"}, c.max_witnesses);
  }
  return res;
}

CheckResult check_hessian(const VerificationConfig& c) {
  Setup s = make_setup(c, false);
  const auto& R = s.R;
  const auto& d = *R.datum;
  CheckResult res{"hessian"};
  std::mt19937_64 rng(split_seed(c.seed, 501));
  std::normal_distribution<double> N01;
  const auto aq = d.a_q_basis();
  double rel = 0, off = 0, crit = 0, eig = 0;
  std::size_t sig_mismatch = 0, ker_mismatch = 0;
  for (std::size_t t = 0; t < c.hessian_X; ++t) {
    QVector X(d.dim());
    for (const auto& b : aq) X = X + from_double(std::round(N01(rng) * 1000) / 1000) * b;
    CriticalInput in(R, s.P, s.a_log, X);
    for (const auto& rep : critical_reps(in)) {
      HessianReport hr = hessian(in, rep.w);
      ++res.count;
      crit = std::max(crit, grad_F(in, rep.x).cwiseAbs().maxCoeff());
      rel = std::max(rel, hr.max_rel_error);
      const double scale = std::max(1.0, hr.analytic_form.size() ? hr.analytic_form.cwiseAbs().maxCoeff() : 0.0);
      off = std::max(off, hr.offdiag_numeric / scale);
      std::vector<double> pe;
      for (const auto& o : hr.prediction.orbits) pe.insert(pe.end(), o.eigenvalues.begin(), o.eigenvalues.end());
      pe.resize(hr.analytic_eigenvalues.size(), 0.0);
      std::sort(pe.begin(), pe.end());
      for (std::size_t k = 0; k < pe.size(); ++k)
        eig = std::max(eig, std::abs(pe[k] - hr.analytic_eigenvalues[k]) / std::max(1.0, std::abs(pe[k])));
      std::vector<double> xd = stdvec(X);
      if (static_cast<std::size_t>(hr.signature.n_zero) != hr.kernel_dim || hr.kernel_dim != hr.prediction.kernel_dim) {
        ++ker_mismatch;
        res.fail(Witness{xd, static_cast<double>(hr.signature.n_zero), "kernel dimension differs, w=" + hr.w_name}, c.max_witnesses);
      }
      if (hr.posdef_numeric != hr.prediction.posdef) {
        ++sig_mismatch;
        res.fail(Witness{xd, static_cast<double>(hr.signature.n_minus), "signature law fails, w=" + hr.w_name}, c.max_witnesses);
      }
    }
  }
  // gradient against finite differences at random points
  double grad = 0, expr = 0;
  auto hs = sample_H(R, 1.0, 1000, split_seed(c.seed, 502));
  for (std::size_t k = 0; k < hs.size(); ++k) {
    QVector X(d.dim());
    for (const auto& b : aq) X = X + from_double(std::round(N01(rng) * 1000) / 1000) * b;
    CriticalInput in(R, s.P, s.a_log, X);
    grad = std::max(grad, (grad_F(in, hs[k].h) - grad_F_numeric(in, hs[k].h)).cwiseAbs().maxCoeff());
    FExpressions fe = F_expressions(in, hs[k].h);
    expr = std::max({expr, std::abs(fe.via_H - fe.via_Hq), std::abs(fe.via_H - fe.via_B)});
  }
  res.metrics["max_rel_error"] = rel;
  res.metrics["offdiag_blocks"] = off;
  res.metrics["grad_at_reps"] = crit;
  res.metrics["eigenvalue_formula_error"] = eig;
  res.metrics["grad_vs_fd"] = grad;
  res.metrics["F_expressions"] = expr;
  res.metrics["signature_mismatches"] = static_cast<double>(sig_mismatch);
  res.metrics["kernel_mismatches"] = static_cast<double>(ker_mismatch);
  if (!(rel <= 1e-6)) res.fail(Witness{{}, rel, "analytic and numeric forms differ"}, c.max_witnesses);
  if (!(off <= 1e-8)) res.fail(Witness{{}, off, "F-orbit blocks are coupled"}, c.max_witnesses);
  if (!(crit <= 1e-9)) res.fail(Witness{{}, crit, "gradient does not vanish at x_w"}, c.max_witnesses);
  if (!(eig <= 1e-6)) res.fail(Witness{{}, eig, "eigenvalues differ from the case formulas"}, c.max_witnesses);
  if (!(grad <= 1e-6)) res.fail(Witness{{}, grad, "gradient differs from finite differences"}, c.max_witnesses);
  if (!(expr <= 1e-9)) res.fail(Witness{{}, expr, "the three expressions of F disagree"}, c.max_witnesses);
  return res;
}

CheckResult check_critical_image(const VerificationConfig& c) {
  Setup s = make_setup(c, false);
  const auto& R = s.R;
  const auto& d = *R.datum;
  CheckResult res{"critical_image"};
  std::mt19937_64 rng(split_seed(c.seed, 601));
  const Mat a = Vec(R.a_matrix(to_eigen(s.a_log)).diagonal().array().exp()).asDiagonal();
  const std::size_t per = 20;
  double worst = INFINITY, value_err = 0;
  std::size_t exact_fail = 0, halfspace_fail = 0, minima = 0;
  auto patterns = vanishing_patterns(d);
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    for (std::size_t t = 0; t < c.pattern_X; ++t) {
      QVector X = t == 0 ? patterns[p].representative : sample_pattern(d, patterns[p], rng);
      CriticalInput in(R, s.P, s.a_log, X);
      auto omegas = omega_X(s.P, s.a_log, X);
      for (const auto& rep : critical_reps(in)) {
        const PolyhedralSet& om = omegas[rep.w];
        for (const auto& v : om.vertices())
          if (d.inner(X, v) != rep.value) ++exact_fail;
        for (const auto& g : om.cone().generators)
          if (sgn(d.inner(X, g)) != 0) ++exact_fail;
        const double val = rep.value.get_d(), vscale = std::max(1.0, std::abs(val));
        value_err = std::max(value_err, std::abs(F(in, rep.x) - val) / vscale);
        if (predicted_signature(in, rep.w).posdef) {
          ++minima;
          if (!local_min_halfspace_check(in, rep.w)) ++halfspace_fail;
        }
        for (std::size_t k = 0; k < per; ++k) {
          Mat h = rep.x * sample_H_X(in, 1.0, rng) * sample_NP_H(in, 1.0, rng);
          Vec y = h_pq(R, a * h, s.P);
          double sl = hrep_slack(om.hrep(), y);
          worst = std::min(worst, sl);
          ++res.count;
          if (sl < -c.tol)
            res.fail(Witness{stdvec(y), sl, "pattern " + std::to_string(p) + ", w=" + rep.name + ": outside Omega_{X,w}"},
                     c.max_witnesses);
          value_err = std::max(value_err, std::abs(F(in, h) - val) / vscale);
        }
      }
    }
  }
  res.worst_slack = std::min(0.0, worst);
  res.metrics["min_slack"] = worst;
  res.metrics["patterns"] = static_cast<double>(patterns.size());
  res.metrics["critical_value_error"] = value_err;
  res.metrics["exact_value_failures"] = static_cast<double>(exact_fail);
  res.metrics["local_minima"] = static_cast<double>(minima);
  res.metrics["halfspace_failures"] = static_cast<double>(halfspace_fail);
  if (exact_fail) res.fail(Witness{{}, 0, "Omega_{X,w} leaves the level set of <X, .>"}, c.max_witnesses);
  if (halfspace_fail) res.fail(Witness{{}, 0, "Omega not on one side of the critical level"}, c.max_witnesses);
  if (!(value_err <= 1e-9)) res.fail(Witness{{}, value_err, "F differs from the critical value"}, c.max_witnesses);
  return res;
}

Report run(const VerificationConfig& c) {
  auto t0 = std::chrono::steady_clock::now();
  c.validate();
  Report rep;
  bool have_base = false;
  auto absorb = [&](Report r) {
    if (!have_base) {
      std::vector<CheckResult> keep = std::move(rep.checks);
      rep = std::move(r);
      rep.checks.insert(rep.checks.begin(), keep.begin(), keep.end());
      have_base = true;
    } else {
      rep.checks.insert(rep.checks.end(), r.checks.begin(), r.checks.end());
    }
  };
  const auto& ck = c.checks;
  if (ck.count(Check::Main) || ck.count(Check::NoLine) || ck.count(Check::InclusionCone)) {
    Report r = verify_main(c);
    if (!ck.count(Check::Main)) {
      std::erase_if(r.checks, [](const CheckResult& x) { return x.name.rfind("main.", 0) == 0; });
      r.samples.clear();
    }
    absorb(std::move(r));
  }
  if (ck.count(Check::Limits)) absorb(verify_limits(c));
  if (ck.count(Check::GK)) absorb(verify_gk(c));
  if (ck.count(Check::Kostant)) rep.checks.push_back(check_closed_form(c));
  if (ck.count(Check::Hessian)) rep.checks.push_back(check_hessian(c));
  if (ck.count(Check::CriticalImage)) rep.checks.push_back(check_critical_image(c));
  if (!have_base) {
    rep.preset = c.preset;
    rep.seed = c.seed;
  }
  if (c.timing) rep.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "svg") return Format::Svg;
  throw Error(ErrorCode::ConfigError, "unknown format " + s);
}

namespace {

// least squares coefficients along the first k a_q basis vectors
Mat aq_coords_solver(const Report& r, std::size_t k) {
  const std::size_t n = r.aq_basis.front().size();
  Mat B(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r.aq_basis[j][i];
  return (B.transpose() * B).inverse() * B.transpose();
}

Vec as_vec(const std::vector<double>& y) { return Eigen::Map<const Vec>(y.data(), static_cast<Eigen::Index>(y.size())); }

std::string render_csv(const Report& r) {
  std::ostringstream o;
  o.precision(17);
  const std::size_t k = r.aq_basis.size();
  o << "radius_index";
  for (std::size_t j = 0; j < k; ++j) o << ",q" << j;
  o << ",slack\n";
  const Mat S = k ? aq_coords_solver(r, k) : Mat();
  for (const auto& s : r.samples) {
    o << s.radius_index;
    if (k) {
      Vec c = S * as_vec(s.y);
      for (Eigen::Index j = 0; j < c.size(); ++j) o << ',' << c(j);
    }
    o << ',' << s.slack << '\n';
  }
  return o.str();
}

// 2D convex hull, counterclockwise
std::vector<Eigen::Vector2d> hull2d(std::vector<Eigen::Vector2d> p) {
  std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  if (p.size() < 3) return p;
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
  };
  std::vector<Eigen::Vector2d> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i - 1]) <= 0) --k;
    h[k++] = p[i - 1];
  }
  h.resize(k - 1);
  return h;
}

std::string render_svg(const Report& r) {
  const double W = 640, Hh = 640, pad = 40;
  std::ostringstream o;
  o.precision(6);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hh << "\" viewBox=\"0 0 " << W
    << ' ' << Hh << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const std::size_t k = std::min<std::size_t>(r.aq_basis.size(), 2);
  if (k == 0) {
    o << "</svg>\n";
    return o.str();
  }
  const Mat Pinv = aq_coords_solver(r, k);
  auto plane = [&](const std::vector<double>& y, std::size_t idx) {
    Vec c = Pinv * as_vec(y);
    return Eigen::Vector2d(c(0), k > 1 ? c(1) : 0.1 * std::sin(static_cast<double>(idx)));
  };
  std::vector<Eigen::Vector2d> pts, verts;
  for (std::size_t i = 0; i < r.samples.size(); ++i) pts.push_back(plane(r.samples[i].y, i));
  for (const auto& v : r.omega_vertices) verts.push_back(plane(v, 0));
  Eigen::Vector2d lo(INFINITY, INFINITY), hi(-INFINITY, -INFINITY);
  for (const auto& p : pts) lo = lo.cwiseMin(p), hi = hi.cwiseMax(p);
  for (const auto& p : verts) lo = lo.cwiseMin(p), hi = hi.cwiseMax(p);
  if (!std::isfinite(lo.x())) lo = Eigen::Vector2d(-1, -1), hi = Eigen::Vector2d(1, 1);
  Eigen::Vector2d span = (hi - lo).cwiseMax(1e-6);
  lo -= 0.05 * span;
  hi += 0.05 * span;
  span = hi - lo;
  auto sx = [&](const Eigen::Vector2d& p) {
    return Eigen::Vector2d(pad + (p.x() - lo.x()) / span.x() * (W - 2 * pad),
                           Hh - pad - (p.y() - lo.y()) / span.y() * (Hh - 2 * pad));
  };
  o << "<defs><clipPath id=\"box\"><rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad
    << "\" height=\"" << Hh - 2 * pad << "\"/></clipPath></defs>\n";
  // Omega outline: vertices plus long steps along the generators
  std::vector<Eigen::Vector2d> region = verts;
  const double L = 4 * span.norm();
  for (const auto& g : r.omega_generators) {
    std::vector<double> zero(g.size(), 0.0);
    Eigen::Vector2d dir = plane(g, 0) - (k > 1 ? Eigen::Vector2d::Zero() : plane(zero, 0));
    if (k == 1) dir.y() = 0;
    if (dir.norm() == 0) continue;
    dir /= dir.norm();
    for (const auto& v : verts) region.push_back(v + L * dir);
  }
  auto outline = hull2d(region);
  o << "<g clip-path=\"url(#box)\">\n<polygon fill=\"#cfe3f7\" stroke=\"#1f5fa0\" stroke-width=\"2\" points=\"";
  for (const auto& p : outline) {
    auto q = sx(p);
    o << q.x() << ',' << q.y() << ' ';
  }
  o << "\"/>\n";
  if (outline.size() <= 2 && outline.size() > 0) {
    auto a = sx(outline.front()), b = sx(outline.back());
    o << "<line x1=\"" << a.x() << "\" y1=\"" << a.y() << "\" x2=\"" << b.x() << "\" y2=\"" << b.y()
      << "\" stroke=\"#1f5fa0\" stroke-width=\"3\"/>\n";
  }
  const std::size_t cap = 20000, step = std::max<std::size_t>(1, pts.size() / cap);
  for (std::size_t i = 0; i < pts.size(); i += step) {
    auto q = sx(pts[i]);
    bool bad = r.samples[i].slack < -1e-7;
    o << "<circle cx=\"" << q.x() << "\" cy=\"" << q.y() << "\" r=\"1.2\" fill=\"" << (bad ? "#d62728" : "#333333")
      << "\" fill-opacity=\"0.5\"/>\n";
  }
  for (const auto& v : verts) {
    auto q = sx(v);
    o << "<circle cx=\"" << q.x() << "\" cy=\"" << q.y() << "\" r=\"4\" fill=\"#ff7f0e\"/>\n";
  }
  o << "</g>\n<text x=\"" << pad << "\" y=\"24\" font-family=\"monospace\" font-size=\"14\">" << r.preset
    << (r.pass() ? "  pass" : "  FAIL") << "</text>\n</svg>\n";
  return o.str();
}

}  // namespace

std::string render(const Report& report, Format format) {
  switch (format) {
    case Format::Json: return to_json(report).dump(2) + "\n";
    case Format::Csv: return render_csv(report);
    case Format::Svg: return render_svg(report);
  }
  return {};
}

void emit_report(const Report& report, Format format, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path);
  f << render(report, format);
  if (!f) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace symconv
