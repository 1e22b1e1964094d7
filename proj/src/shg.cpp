#include "pairsim/shg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pairsim/errors.hpp"

namespace pairsim {

void CavitySpec::validate() const {
  auto fraction = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
      throw ConfigError(std::string("cavity.") + name + " must be in [0, 1]");
  };
  fraction(r1, "r1");
  fraction(t1, "t1");
  fraction(r2, "r2");
  fraction(t2, "t2");
  fraction(t2_sh, "t2_sh");
  fraction(loss_delta, "loss_delta");
  if (r1 + t1 > 1.0 + 1e-12) throw ConfigError("cavity: r1 + t1 must be <= 1");
  if (!(gamma_sh >= 0.0)) throw ConfigError("cavity.gamma_sh must be >= 0");
  if (!(single_pass_t() > 0.0)) throw ConfigError("cavity.loss_delta must be < 1");
}

double round_trip_efficiency(const CavitySpec& cavity, double pc_w) {
  if (!(pc_w >= 0.0)) throw RangeError("circulating power must be >= 0");
  const double conversion = cavity.gamma_sh * pc_w;
  if (conversion >= 1.0) {
    std::ostringstream os;
    os << "over-conversion: model outside validity (gamma*pc = " << conversion << " >= 1)";
    throw SolverError(os.str());
  }
  const double t = cavity.single_pass_t();
  return t * t * (1.0 - conversion) * (1.0 - conversion) * cavity.r2;
}

namespace {

double fixed_point_rhs(const CavitySpec& cavity, double p1_w, double pc_w) {
  const double rm = round_trip_efficiency(cavity, pc_w);
  const double denom = 1.0 - std::sqrt(cavity.r1 * rm);
  return cavity.t1 * p1_w / (denom * denom);
}

} // namespace

ShgOperatingPoint circulating_power(const CavitySpec& cavity, double p1_w) {
  if (!(p1_w >= 0.0)) throw RangeError("fundamental input power must be >= 0");
  ShgOperatingPoint pt;
  pt.p1_w = p1_w;
  if (p1_w == 0.0) {
    pt.rm = round_trip_efficiency(cavity, 0.0);
    return pt;
  }
  // Any fixed point satisfies pc >= t1*p1, so the model has no valid solution
  // once even the incoupled power over-converts.
  if (cavity.gamma_sh * cavity.t1 * p1_w >= 1.0)
    throw SolverError("over-conversion: model outside validity (gamma*t1*p1 >= 1)");
  const double pc_max = cavity.gamma_sh > 0.0
                            ? (1.0 - 1e-9) / cavity.gamma_sh
                            : std::numeric_limits<double>::infinity();

  double pc = std::min(fixed_point_rhs(cavity, p1_w, 0.0), pc_max);
  const int max_iterations = 10000;
  bool converged = false;
  for (int it = 0; it < max_iterations; ++it) {
    const double next =
        std::min(0.5 * pc + 0.5 * fixed_point_rhs(cavity, p1_w, pc), pc_max);
    const bool done = std::abs(next - pc) < 1e-9 * std::max(std::abs(next), 1e-30);
    pc = next;
    if (done) {
      converged = true;
      break;
    }
  }
  pt.pc_w = pc;
  pt.residual_w = std::abs(pc - fixed_point_rhs(cavity, p1_w, pc));
  if (!converged) {
    std::ostringstream os;
    os << "circulating-power fixed point did not converge after " << max_iterations
       << " iterations (last residual " << pt.residual_w << " W)";
    throw SolverError(os.str());
  }
  pt.rm = round_trip_efficiency(cavity, pc);
  pt.p2_w = 2.0 * cavity.gamma_sh * pc * pc * cavity.t2_sh;
  return pt;
}

double sh_output_power(const CavitySpec& cavity, double p1_w) {
  return circulating_power(cavity, p1_w).p2_w;
}

double calibrate_gamma(const CavitySpec& cavity_without_gamma, double p1_ref_w,
                       double p2_ref_w) {
  if (!(p1_ref_w > 0.0) || !(p2_ref_w > 0.0))
    throw RangeError("calibration requires positive reference powers");
  CavitySpec cavity = cavity_without_gamma;
  auto p2_at = [&](double gamma) {
    cavity.gamma_sh = gamma;
    return sh_output_power(cavity, p1_ref_w);
  };

  const double gamma_min = 1e-8, gamma_max = 1.0;
  double lo = gamma_min;
  double f_lo = p2_at(lo);
  if (f_lo >= p2_ref_w) {
    std::ostringstream os;
    os << "calibration target " << p2_ref_w << " W already exceeded at gamma = "
       << gamma_min << " 1/W (p2 = " << f_lo << " W)";
    throw SolverError(os.str());
  }
  // p2(gamma) rises to a single maximum and then decays; walk up the rising
  // branch until the target is crossed.
  double hi = lo, f_hi = f_lo;
  while (true) {
    const double next = std::min(hi * 2.0, gamma_max);
    const double f_next = p2_at(next);
    if (f_next >= p2_ref_w) {
      lo = hi;
      hi = next;
      break;
    }
    if (f_next < f_hi || next >= gamma_max) {
      std::ostringstream os;
      os << "calibration target unreachable on [" << gamma_min << ", " << gamma_max
         << "] 1/W: p2(" << gamma_min << ") = " << f_lo << " W, maximum reached "
         << std::max(f_hi, f_next) << " W < target " << p2_ref_w << " W";
      throw SolverError(os.str());
    }
    hi = next;
    f_hi = f_next;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = p2_at(mid);
    if (std::abs(f_mid - p2_ref_w) < 1e-9) return mid;
    if (f_mid < p2_ref_w)
      lo = mid;
    else
      hi = mid;
  }
  throw SolverError("calibration bisection failed to reach the 1e-9 W tolerance");
}

std::vector<ShgOperatingPoint> power_curve(const CavitySpec& cavity,
                                           std::span<const double> p1_values_w) {
  for (size_t i = 0; i < p1_values_w.size(); ++i) {
    if (!(p1_values_w[i] >= 0.0))
      throw RangeError("power curve inputs must be nonnegative");
    if (i > 0 && p1_values_w[i] < p1_values_w[i - 1])
      throw RangeError("power curve inputs must be sorted ascending");
  }
  std::vector<ShgOperatingPoint> out;
  out.reserve(p1_values_w.size());
  for (double p1 : p1_values_w) out.push_back(circulating_power(cavity, p1));
  return out;
}

} // namespace pairsim
