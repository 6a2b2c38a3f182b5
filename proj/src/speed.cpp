#include "ovalflow/speed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ovalflow/errors.hpp"

namespace ovalflow {

SpeedFunction::SpeedFunction(std::string name, int n, Eval eval, Grad grad,
                             std::optional<Eval> closure)
    : name_(std::move(name)), n_(n), eval_(std::move(eval)), grad_(std::move(grad)),
      closure_(std::move(closure)) {
  if (n_ < 2) throw ArityError("speed '" + name_ + "' needs arity n >= 2");
}

void SpeedFunction::check_arity(std::span<const double> lambda) const {
  if (static_cast<int>(lambda.size()) != n_) {
    std::ostringstream os;
    os << "speed '" << name_ << "' has arity " << n_ << ", got " << lambda.size()
       << " curvatures";
    throw ArityError(os.str());
  }
}

double SpeedFunction::eval(std::span<const double> lambda) const {
  check_arity(lambda);
  for (double l : lambda) {
    if (!(l > 0.0)) throw DomainError("curvature vector must lie in the positive cone");
  }
  return eval_(lambda);
}

Vec SpeedFunction::grad(std::span<const double> lambda) const {
  check_arity(lambda);
  for (double l : lambda) {
    if (!(l > 0.0)) throw DomainError("curvature vector must lie in the positive cone");
  }
  Vec out(lambda.size());
  grad_(lambda, out);
  return out;
}

double SpeedFunction::closure_eval(std::span<const double> lambda) const {
  if (!closure_) throw CapabilityError("speed '" + name_ + "' has no closure extension");
  check_arity(lambda);
  bool any_positive = false;
  for (double l : lambda) {
    if (l < 0.0 || !std::isfinite(l)) {
      throw DomainError("closure evaluation needs nonnegative curvatures");
    }
    any_positive = any_positive || l > 0.0;
  }
  if (!any_positive) throw DomainError("closure evaluation is undefined at the origin");
  return (*closure_)(lambda);
}

double eval_speed(const SpeedFunction& f, std::span<const double> lambda) {
  return f.eval(lambda);
}

Vec grad_speed(const SpeedFunction& f, std::span<const double> lambda) {
  return f.grad(lambda);
}

double boundary_speed_cJ0(const SpeedFunction& f, int n, int J) {
  if (n != f.arity()) throw ArityError("boundary speed requested for mismatched arity");
  if (J < 1 || J > n - 1) throw DomainError("J must satisfy 1 <= J <= n-1");
  Vec point(n, 0.0);
  std::fill(point.end() - J, point.end(), 1.0);
  return f.closure_eval(point);
}

// ---------------------------------------------------------------------------
// Registry

namespace {

SpeedFunction make_mean_curvature(int n) {
  auto eval = [](std::span<const double> l) { return std::accumulate(l.begin(), l.end(), 0.0); };
  auto grad = [](std::span<const double>, std::span<double> out) {
    std::fill(out.begin(), out.end(), 1.0);
  };
  SpeedFunction f("H", n, eval, grad, eval);
  f.set_block_eval([n](double y, int J, double z, double p) {
    const int nz = n - J - 1;
    return SpeedFunction::BlockValue{J * y + (nz > 0 ? nz * z : 0.0) + p, static_cast<double>(n)};
  });
  return f;
}

SpeedFunction make_l2_norm(int n) {
  auto eval = [](std::span<const double> l) {
    double s = 0.0;
    for (double x : l) s += x * x;
    return std::sqrt(s);
  };
  auto grad = [eval](std::span<const double> l, std::span<double> out) {
    const double norm = eval(l);
    for (std::size_t i = 0; i < l.size(); ++i) out[i] = l[i] / norm;
  };
  return SpeedFunction("l2_norm", n, eval, grad, eval);
}

// ((sum l^p) / n)^(1/p)
SpeedFunction make_power_mean(std::string name, int n, double p) {
  auto eval = [n, p](std::span<const double> l) {
    double s = 0.0;
    for (double x : l) s += std::pow(x, p);
    return std::pow(s / n, 1.0 / p);
  };
  auto grad = [n, p, eval](std::span<const double> l, std::span<double> out) {
    const double m = eval(l);
    const double scale = std::pow(m, 1.0 - p) / n;
    for (std::size_t i = 0; i < l.size(); ++i) out[i] = scale * std::pow(l[i], p - 1.0);
  };
  std::optional<SpeedFunction::Eval> closure;
  if (p > 0.0) {
    closure = eval;
  } else {
    // Negative exponents: the continuous extension vanishes once any entry does.
    closure = [eval](std::span<const double> l) {
      for (double x : l) {
        if (x == 0.0) return 0.0;
      }
      return eval(l);
    };
  }
  return SpeedFunction(std::move(name), n, eval, grad, closure);
}

SpeedFunction make_gauss(int n) {
  auto eval = [n](std::span<const double> l) {
    double log_sum = 0.0;
    for (double x : l) log_sum += std::log(x);
    return n * std::exp(log_sum / n);
  };
  auto grad = [n, eval](std::span<const double> l, std::span<double> out) {
    const double g = eval(l);
    for (std::size_t i = 0; i < l.size(); ++i) out[i] = g / (n * l[i]);
  };
  auto closure = [eval](std::span<const double> l) {
    for (double x : l) {
      if (x == 0.0) return 0.0;
    }
    return eval(l);
  };
  return SpeedFunction("gauss", n, eval, grad, closure);
}

}  // namespace

const std::vector<std::string>& registered_speeds() {
  static const std::vector<std::string> names = {
      "H", "harmonic_mean", "power_mean_0.5", "power_mean_2", "l2_norm", "gauss"};
  return names;
}

bool is_registered_speed(std::string_view name) {
  const auto& names = registered_speeds();
  return std::find(names.begin(), names.end(), name) != names.end();
}

SpeedFunction make_speed(std::string_view name, int n) {
  if (n < 2) throw ArityError("speeds need arity n >= 2");
  if (name == "H") return make_mean_curvature(n);
  if (name == "harmonic_mean") return make_power_mean("harmonic_mean", n, -1.0);
  if (name == "power_mean_0.5") return make_power_mean("power_mean_0.5", n, 0.5);
  if (name == "power_mean_2") return make_power_mean("power_mean_2", n, 2.0);
  if (name == "l2_norm") return make_l2_norm(n);
  if (name == "gauss") return make_gauss(n);
  std::string msg = "unknown speed '" + std::string(name) + "'; registered:";
  for (const auto& s : registered_speeds()) msg += " " + s;
  throw DomainError(msg);
}

// ---------------------------------------------------------------------------
// Validators

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_applicable: return "not-applicable";
  }
  return "unknown";
}

bool AssumptionReport::assumption_a() const {
  return a1.verdict == Verdict::pass || a2.verdict == Verdict::pass ||
         a3.verdict == Verdict::pass || a4.verdict == Verdict::pass;
}

std::vector<Vec> hessian_fd(const std::function<double(std::span<const double>)>& g,
                            std::span<const double> lambda) {
  const std::size_t n = lambda.size();
  double inf_norm = 0.0;
  for (double x : lambda) inf_norm = std::max(inf_norm, std::abs(x));
  const double h = 1e-5 * std::max(1.0, inf_norm);

  Vec p(lambda.begin(), lambda.end());
  auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
    p[i] += di;
    p[j] += dj;
    const double v = g(p);
    p[i] -= di;
    p[j] -= dj;
    return v;
  };
  const double g0 = g(p);
  std::vector<Vec> hess(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    p[i] += h;
    const double gp = g(p);
    p[i] -= 2 * h;
    const double gm = g(p);
    p[i] += h;
    hess[i][i] = (gp - 2 * g0 + gm) / (h * h);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h)) /
                       (4 * h * h);
      hess[i][j] = hess[j][i] = v;
    }
  }
  return hess;
}

namespace {

struct SemidefiniteProbe {
  double min_eig;
  double max_eig;
  double tol;
};

SemidefiniteProbe probe_hessian(const std::function<double(std::span<const double>)>& g,
                                std::span<const double> lambda) {
  const auto hess = hessian_fd(g, lambda);
  const int n = static_cast<int>(lambda.size());
  Eigen::MatrixXd m(n, n);
  double max_entry = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = hess[i][j];
      max_entry = std::max(max_entry, std::abs(hess[i][j]));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  double inf_norm = 0.0;
  for (double x : lambda) inf_norm = std::max(inf_norm, std::abs(x));
  // Finite-difference noise is ~1e-6 f/|lambda|^2; homogeneous functions have
  // an exact null direction along lambda, so the tolerance must absorb it.
  const double tol = 1e-5 * max_entry + 1e-4 * std::abs(g(lambda)) / (inf_norm * inf_norm);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff(), tol};
}

std::vector<Vec> interior_samples(int n, const SamplingSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_lo = std::log(spec.lo);
  const double log_hi = std::log(spec.hi);
  std::vector<Vec> out;
  out.reserve(spec.count);
  out.emplace_back(n, 1.0);
  while (static_cast<int>(out.size()) < spec.count) {
    Vec v(n);
    for (auto& x : v) x = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
    out.push_back(std::move(v));
  }
  return out;
}

void fail_with(CheckResult& c, std::span<const double> witness, std::string note) {
  if (c.verdict == Verdict::fail) return;
  c.verdict = Verdict::fail;
  c.witness = Vec(witness.begin(), witness.end());
  c.note = std::move(note);
}

// One-sided second-order derivative of the closure extension in entry i,
// which must be zero at the base point.
double one_sided_partial(const SpeedFunction& f, Vec p, std::size_t i, double h) {
  const double f0 = f.closure_eval(p);
  p[i] = h;
  const double f1 = f.closure_eval(p);
  p[i] = 2 * h;
  const double f2 = f.closure_eval(p);
  return (-3 * f0 + 4 * f1 - f2) / (2 * h);
}

double centered_partial(const SpeedFunction& f, Vec p, std::size_t i, double h) {
  const double x = p[i];
  const double step = std::min(h, 0.5 * x);
  p[i] = x + step;
  const double fp = f.closure_eval(p);
  p[i] = x - step;
  const double fm = f.closure_eval(p);
  return (fp - fm) / (2 * step);
}

}  // namespace

AssumptionReport check_assumptions(const SpeedFunction& f, int J, const SamplingSpec& samples) {
  const int n = f.arity();
  if (J < 1 || J > n - 1) throw DomainError("J must satisfy 1 <= J <= n-1");
  if (samples.count < 1 || !(samples.lo > 0.0) || !(samples.hi > samples.lo)) {
    throw DomainError("sampling spec needs count >= 1 and 0 < lo < hi");
  }
  if (!f.has_closure()) {
    throw CapabilityError("speed '" + f.name() + "' lacks a closure extension needed by B_J and E");
  }

  AssumptionReport rep;
  rep.speed = f.name();
  rep.n = n;
  rep.J = J;

  if (n == 2) {
    rep.a1.verdict = Verdict::pass;
  } else {
    rep.a1.verdict = Verdict::not_applicable;
    rep.a1.note = "dimension condition n = 2 does not hold";
  }

  const auto pts = interior_samples(n, samples);
  rep.sample_count = static_cast<int>(pts.size());

  auto feval = [&f](std::span<const double> l) { return f.eval_unchecked(l); };
  auto fstar = [&f](std::span<const double> l) {
    Vec inv(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) inv[i] = 1.0 / l[i];
    return -f.eval_unchecked(inv);
  };

  rep.a2.verdict = rep.a3.verdict = rep.a4.verdict = Verdict::pass;
  double min_on_edge = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    const auto probe = probe_hessian(feval, p);
    if (probe.min_eig < -probe.tol) fail_with(rep.a2, p, "Hessian has a negative eigenvalue");
    if (probe.max_eig > probe.tol) {
      fail_with(rep.a3, p, "Hessian has a positive eigenvalue");
      fail_with(rep.a4, p, "f is not concave");
    }
    if (rep.a4.verdict == Verdict::pass) {
      const auto star = probe_hessian(fstar, p);
      if (star.max_eig > star.tol) fail_with(rep.a4, p, "f* is not concave");
    }
  }
  // A3 also asks f to vanish on the boundary of the cone; recorded, not gated.
  {
    Vec edge(n, 1.0);
    edge[0] = 0.0;
    min_on_edge = f.closure_eval(edge);
    std::ostringstream os;
    os << "concavity sampled; boundary value f(0,1,...,1) = " << min_on_edge
       << (min_on_edge == 0.0 ? " (vanishes)" : " (does not vanish)");
    if (rep.a3.note.empty()) rep.a3.note = os.str();
  }

  // B_J: value at the cylinder point and continuity along the approach.
  rep.bJ.J = J;
  Vec bpoint(n, 0.0);
  std::fill(bpoint.end() - J, bpoint.end(), 1.0);
  rep.bJ.witness = bpoint;
  rep.bJ.cJ0 = f.closure_eval(bpoint);
  for (int k = 1; k <= 8; ++k) {
    Vec q = bpoint;
    for (int i = 0; i < n - J; ++i) q[i] = std::pow(10.0, -k);
    rep.bJ.approach.push_back(f.closure_eval(q));
  }
  {
    const double scale = std::max(1.0, std::abs(rep.bJ.cJ0));
    bool shrinking = true;
    for (std::size_t k = 1; k < rep.bJ.approach.size(); ++k) {
      const double prev = std::abs(rep.bJ.approach[k - 1] - rep.bJ.cJ0);
      const double cur = std::abs(rep.bJ.approach[k] - rep.bJ.cJ0);
      if (cur > prev + 1e-15 * scale) shrinking = false;
    }
    const double last_gap = std::abs(rep.bJ.approach.back() - rep.bJ.cJ0);
    if (!(rep.bJ.cJ0 > 1e-12)) {
      rep.bJ.verdict = Verdict::fail;
      rep.bJ.note = "c_J0 vanishes";
    } else if (!shrinking || last_gap > 1e-3 * scale) {
      rep.bJ.verdict = Verdict::fail;
      rep.bJ.note = "extension is not continuous along the approach to the boundary";
    } else {
      rep.bJ.verdict = Verdict::pass;
    }
  }

  // E: gradient bounded away from zero (and finite) on the closure.
  rep.e.verdict = Verdict::pass;
  {
    constexpr double floor = 1e-8;
    std::mt19937_64 rng(samples.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vec> boundary;
    for (int jj = 1; jj <= n - 1; ++jj) {
      Vec q(n, 0.0);
      std::fill(q.end() - jj, q.end(), 1.0);
      boundary.push_back(q);
    }
    const int extra = std::max(20, samples.count / 10);
    for (int s = 0; s < extra; ++s) {
      Vec q(n);
      for (auto& x : q) x = std::exp(std::log(samples.lo) +
                                     (std::log(samples.hi) - std::log(samples.lo)) * unit(rng));
      const int zeros = 1 + static_cast<int>(unit(rng) * (n - 1)) % (n - 1);
      std::vector<int> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      for (int z = 0; z < zeros; ++z) q[idx[z]] = 0.0;
      boundary.push_back(std::move(q));
    }
    for (const auto& q : boundary) {
      double inf_norm = 0.0;
      for (double x : q) inf_norm = std::max(inf_norm, x);
      const double h = 1e-5 * std::max(1.0, inf_norm);
      for (std::size_t i = 0; i < q.size(); ++i) {
        double g;
        if (q[i] == 0.0) {
          g = one_sided_partial(f, q, i, h);
          const double g_fine = one_sided_partial(f, q, i, h * 1e-2);
          if (!std::isfinite(g_fine) || std::abs(g_fine) > 2 * std::abs(g) + 1e-6) {
            fail_with(rep.e, q, "gradient is unbounded at the boundary");
            break;
          }
        } else {
          g = centered_partial(f, q, i, h);
        }
        if (!std::isfinite(g) || g < floor) {
          fail_with(rep.e, q, "gradient component below the positivity floor");
          break;
        }
      }
      if (rep.e.verdict == Verdict::fail) break;
    }
    rep.sample_count += static_cast<int>(boundary.size());
  }
  return rep;
}

void to_json(nlohmann::json& j, const CheckResult& c) {
  j = nlohmann::json{{"verdict", std::string(to_string(c.verdict))}};
  if (c.witness) j["witness"] = *c.witness;
  if (!c.note.empty()) j["note"] = c.note;
}

void to_json(nlohmann::json& j, const BoundaryCheck& c) {
  j = nlohmann::json{{"J", c.J},
                     {"verdict", std::string(to_string(c.verdict))},
                     {"cJ0", c.cJ0},
                     {"witness", c.witness},
                     {"approach", c.approach}};
  if (!c.note.empty()) j["note"] = c.note;
}

void to_json(nlohmann::json& j, const AssumptionReport& r) {
  j = nlohmann::json{{"speed", r.speed},
                     {"n", r.n},
                     {"J", r.J},
                     {"a1", r.a1},
                     {"a2", r.a2},
                     {"a3", r.a3},
                     {"a4", r.a4},
                     {"assumption_a", r.assumption_a()},
                     {"bJ", r.bJ},
                     {"e", r.e},
                     {"sample_count", r.sample_count},
                     {"evidence", r.evidence}};
}

}  // namespace ovalflow
