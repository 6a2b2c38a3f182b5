#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ovalflow {

using Vec = std::vector<double>;

/// A symmetric, degree-one homogeneous, monotone function of the principal
/// curvatures. Entries of the argument are curvatures in any order.
class SpeedFunction {
 public:
  using Eval = std::function<double(std::span<const double>)>;
  using Grad = std::function<void(std::span<const double>, std::span<double>)>;

  SpeedFunction(std::string name, int n, Eval eval, Grad grad,
                std::optional<Eval> closure = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  int arity() const noexcept { return n_; }
  bool has_closure() const noexcept { return closure_.has_value(); }

  /// Checked evaluation on the open positive cone.
  double eval(std::span<const double> lambda) const;
  Vec grad(std::span<const double> lambda) const;
  /// Continuous extension to nonnegative vectors other than the origin.
  double closure_eval(std::span<const double> lambda) const;

  /// f and the sum of its partial derivatives on a spectrum with values
  /// y, z, p of multiplicities J, n-J-1, 1.
  struct BlockValue {
    double f;
    double grad_sum;
  };
  using BlockEval = std::function<BlockValue(double y, int J, double z, double p)>;
  /// Optional closed form of the block evaluation; the solver falls back to
  /// eval and grad without it.
  void set_block_eval(BlockEval block) { block_ = std::move(block); }
  bool has_block_eval() const noexcept { return static_cast<bool>(block_); }

  // Unchecked variants for the solver inner loop.
  double eval_unchecked(std::span<const double> lambda) const { return eval_(lambda); }
  void grad_unchecked(std::span<const double> lambda, std::span<double> out) const {
    grad_(lambda, out);
  }
  BlockValue block_unchecked(double y, int J, double z, double p) const {
    return block_(y, J, z, p);
  }

 private:
  void check_arity(std::span<const double> lambda) const;

  std::string name_;
  int n_;
  Eval eval_;
  Grad grad_;
  std::optional<Eval> closure_;
  BlockEval block_;
};

double eval_speed(const SpeedFunction& f, std::span<const double> lambda);
Vec grad_speed(const SpeedFunction& f, std::span<const double> lambda);

/// f(0,...,0,1,...,1) with n-J zeros and J ones.
double boundary_speed_cJ0(const SpeedFunction& f, int n, int J);

/// Names accepted by make_speed, in registry order.
const std::vector<std::string>& registered_speeds();
bool is_registered_speed(std::string_view name);
/// Builds a registered speed of arity n. Throws DomainError for unknown
/// names and ArityError for n < 2.
SpeedFunction make_speed(std::string_view name, int n);

// ---------------------------------------------------------------------------
// Structural assumption validators

struct SamplingSpec {
  int count = 1000;
  std::uint64_t seed = 0;
  double lo = 0.1;  ///< samples are log-uniform in [lo, hi]^n
  double hi = 10.0;
};

enum class Verdict { pass, fail, not_applicable };
std::string_view to_string(Verdict v);

struct CheckResult {
  Verdict verdict = Verdict::not_applicable;
  std::optional<Vec> witness;
  std::string note;
};

struct BoundaryCheck {
  int J = 0;
  Verdict verdict = Verdict::not_applicable;
  double cJ0 = 0.0;
  Vec witness;
  /// closure_eval at (10^-k,...,10^-k,1,...,1), k = 1..8.
  std::vector<double> approach;
  std::string note;
};

struct AssumptionReport {
  std::string speed;
  int n = 0;
  int J = 0;
  CheckResult a1, a2, a3, a4;
  BoundaryCheck bJ;
  CheckResult e;
  int sample_count = 0;
  std::string evidence = "sampled finite-difference evidence, not a proof";

  /// True when at least one of A1..A4 passes.
  bool assumption_a() const;
};

AssumptionReport check_assumptions(const SpeedFunction& f, int J, const SamplingSpec& samples);

/// Central finite-difference Hessian with step 1e-5 * max(1, |lambda|_inf).
std::vector<Vec> hessian_fd(const std::function<double(std::span<const double>)>& g,
                            std::span<const double> lambda);

void to_json(nlohmann::json& j, const CheckResult& c);
void to_json(nlohmann::json& j, const BoundaryCheck& c);
void to_json(nlohmann::json& j, const AssumptionReport& r);

}  // namespace ovalflow
