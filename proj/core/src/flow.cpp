#include "rayleigh/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace rayleigh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Dormand-Prince 5(4) with the Hairer continuous extension. Coefficients
// match DOPRI5 as published in Hairer/Norsett/Wanner.
template <int N, class Rhs>
class Dopri5 {
 public:
  Dopri5(Rhs rhs, const IntegrationOptions& opts) : rhs_(rhs), opts_(opts) {}

  void init(double t0, const std::array<double, N>& y0, double direction) {
    t_ = t0;
    y_ = y0;
    rhs_(y_.data(), k1_.data());
    ++evals_;
    posneg_ = direction >= 0.0 ? 1.0 : -1.0;
    h_ = initial_step();
  }

  double t() const { return t_; }
  double t_prev() const { return t_prev_; }
  double h_last() const { return t_ - t_prev_; }
  const std::array<double, N>& y() const { return y_; }

  long steps_accepted = 0;
  long steps_rejected = 0;

  long evals() const { return evals_; }

  /// One accepted step; afterwards the dense interpolant covers
  /// [t_prev(), t()]. Throws FlowError on underflow or step-count blowout.
  void step() {
    while (true) {
      if (steps_accepted + steps_rejected > opts_.max_steps) {
        throw FlowError(FlowError::Kind::TooManySteps, "integration exceeded max_steps", t_,
                        {y_[0], y_[1]});
      }
      if (std::abs(h_) <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_))) {
        throw FlowError(FlowError::Kind::StepUnderflow,
                        "step size underflow (near-singular dynamics)", t_, {y_[0], y_[1]});
      }

      const double h = h_;
      std::array<double, N> tmp;

      auto stage = [&](const double* coeffs, int count, std::array<double, N>& out) {
        const std::array<double, N>* ks[6] = {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_};
        for (int c = 0; c < N; ++c) {
          double acc = 0.0;
          for (int s = 0; s < count; ++s) acc += coeffs[s] * (*ks[s])[c];
          out[c] = y_[c] + h * acc;
        }
      };

      static constexpr double b2[] = {1.0 / 5};
      static constexpr double b3[] = {3.0 / 40, 9.0 / 40};
      static constexpr double b4[] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
      static constexpr double b5[] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                                      -212.0 / 729};
      static constexpr double b6[] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                                      -5103.0 / 18656};
      static constexpr double c1 = 35.0 / 384, c3 = 500.0 / 1113, c4 = 125.0 / 192,
                              c5 = -2187.0 / 6784, c6 = 11.0 / 84;
      static constexpr double e1 = c1 - 5179.0 / 57600, e3 = c3 - 7571.0 / 16695,
                              e4 = c4 - 393.0 / 640, e5 = c5 + 92097.0 / 339200,
                              e6 = c6 - 187.0 / 2100, e7 = -1.0 / 40;

      stage(b2, 1, tmp);
      rhs_(tmp.data(), k2_.data());
      stage(b3, 2, tmp);
      rhs_(tmp.data(), k3_.data());
      stage(b4, 3, tmp);
      rhs_(tmp.data(), k4_.data());
      stage(b5, 4, tmp);
      rhs_(tmp.data(), k5_.data());
      stage(b6, 5, tmp);
      rhs_(tmp.data(), k6_.data());

      std::array<double, N> ynew;
      for (int c = 0; c < N; ++c) {
        ynew[c] = y_[c] + h * (c1 * k1_[c] + c3 * k3_[c] + c4 * k4_[c] + c5 * k5_[c] + c6 * k6_[c]);
      }
      rhs_(ynew.data(), k7_.data());
      evals_ += 6;

      double err = 0.0;
      for (int c = 0; c < N; ++c) {
        const double e = h * (e1 * k1_[c] + e3 * k3_[c] + e4 * k4_[c] + e5 * k5_[c] + e6 * k6_[c] +
                              e7 * k7_[c]);
        const double sc = opts_.atol + opts_.rtol * std::max(std::abs(y_[c]), std::abs(ynew[c]));
        err += (e / sc) * (e / sc);
      }
      err = std::sqrt(err / N);

      if (!std::isfinite(err)) {
        ++steps_rejected;
        h_ = 0.2 * h;
        continue;
      }

      const double fac =
          std::clamp(0.9 * std::pow(std::max(err, 1e-30), -0.2), 0.2, 10.0);
      if (err <= 1.0) {
        ++steps_accepted;
        t_prev_ = t_;
        y_prev_ = y_;
        t_ += h;
        y_ = ynew;
        k1_prev_ = k1_;
        k1_ = k7_;  // FSAL
        h_ = h * fac;
        return;
      }
      ++steps_rejected;
      h_ = h * std::min(fac, 1.0);
    }
  }

  void clamp_next_step(double limit) {
    if (std::abs(h_) > limit) h_ = posneg_ * limit;
  }

  /// Dense evaluation at theta in [0, 1] across the last accepted step.
  void dense(double theta, std::array<double, N>& out) const {
    static constexpr double c1 = 35.0 / 384, c3 = 500.0 / 1113, c4 = 125.0 / 192,
                            c5 = -2187.0 / 6784, c6 = 11.0 / 84;
    const double h = t_ - t_prev_;
    const double x1 = 5.0 * (2558722523.0 - 31403016.0 * theta) / 11282082432.0;
    const double x3 = 100.0 * (882725551.0 - 15701508.0 * theta) / 32700410799.0;
    const double x4 = 25.0 * (443332067.0 - 31403016.0 * theta) / 1880347072.0;
    const double x5 = 32805.0 * (23143187.0 - 3489224.0 * theta) / 199316789632.0;
    const double x6 = 55.0 * (29972135.0 - 7076736.0 * theta) / 822651844.0;
    const double x7 = 10.0 * (7414447.0 - 829305.0 * theta) / 29380423.0;

    const double tm1 = theta - 1.0;
    const double A = theta * theta * (3.0 - 2.0 * theta);
    const double B = theta * theta * tm1;
    const double C = theta * theta * tm1 * tm1;
    const double D = theta * tm1 * tm1;

    const double w1 = A * c1 - C * x1 + D;
    const double w3 = A * c3 + C * x3;
    const double w4 = A * c4 - C * x4;
    const double w5 = A * c5 + C * x5;
    const double w6 = A * c6 - C * x6;
    const double w7 = B + C * x7;

    for (int c = 0; c < N; ++c) {
      out[c] = y_prev_[c] + h * (w1 * k1_prev_[c] + w3 * k3_[c] + w4 * k4_[c] + w5 * k5_[c] +
                                 w6 * k6_[c] + w7 * k1_[c]);
    }
  }

 private:
  double initial_step() const {
    double d0 = 0.0, d1 = 0.0;
    for (int c = 0; c < N; ++c) {
      const double sc = opts_.atol + opts_.rtol * std::abs(y_[c]);
      d0 += (y_[c] / sc) * (y_[c] / sc);
      d1 += (k1_[c] / sc) * (k1_[c] / sc);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    return posneg_ * std::min(h0, 1.0);
  }

  Rhs rhs_;
  IntegrationOptions opts_;
  double t_ = 0.0, t_prev_ = 0.0, h_ = 0.0, posneg_ = 1.0;
  std::array<double, N> y_{}, y_prev_{};
  std::array<double, N> k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{}, k1_prev_{};
  long evals_ = 0;
};

struct PlaneRhs {
  const CompiledSystem* sys;
  double sign;
  void operator()(const double* y, double* dydt) const {
    double dx, dy;
    sys->eval(y[0], y[1], dx, dy);
    dydt[0] = sign * dx;
    dydt[1] = sign * dy;
  }
};

struct PlaneDivRhs {
  const CompiledSystem* sys;
  double sign;
  void operator()(const double* y, double* dydt) const {
    double dx, dy;
    sys->eval(y[0], y[1], dx, dy);
    dydt[0] = sign * dx;
    dydt[1] = sign * dy;
    dydt[2] = sign * sys->divergence_at(y[0], y[1]);
  }
};

void validate_tolerances(const IntegrationOptions& opts) {
  if (opts.rtol < 1e-13 || opts.rtol > 1e-3 || opts.atol < 1e-13 || opts.atol > 1e-3) {
    throw std::invalid_argument("tolerances must lie in [1e-13, 1e-3]");
  }
}

}  // namespace

Trajectory integrate(const PlanarPolySystem& sys, Vec2 x0, double t_end,
                     const IntegrationOptions& opts) {
  validate_tolerances(opts);
  if (!std::isfinite(t_end)) throw std::invalid_argument("integrate: t_end must be finite");
  if (!std::isfinite(x0.x) || !std::isfinite(x0.y)) {
    throw std::invalid_argument("integrate: initial state must be finite");
  }

  const CompiledSystem compiled(sys);
  Dopri5<2, PlaneRhs> stepper(PlaneRhs{&compiled, 1.0}, opts);
  stepper.init(0.0, {x0.x, x0.y}, t_end);

  Trajectory out;
  out.meta.rtol = opts.rtol;
  out.meta.atol = opts.atol;
  out.states.push_back({0.0, x0.x, x0.y});
  if (t_end == 0.0) return out;

  const double dir = t_end > 0.0 ? 1.0 : -1.0;
  const double end_slack =
      4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_end));
  while (dir * (t_end - stepper.t()) > end_slack) {
    stepper.clamp_next_step(std::abs(t_end - stepper.t()));
    stepper.step();
    const auto& y = stepper.y();
    if (std::hypot(y[0], y[1]) > opts.escape_norm) {
      throw FlowError(FlowError::Kind::Escape,
                      "trajectory escaped past the blow-up threshold (escape time estimate " +
                          std::to_string(stepper.t()) + ")",
                      stepper.t(), {y[0], y[1]});
    }
    out.states.push_back({stepper.t(), y[0], y[1]});
  }
  out.meta.steps_accepted = stepper.steps_accepted;
  out.meta.steps_rejected = stepper.steps_rejected;
  out.meta.rhs_evaluations = stepper.evals();
  return out;
}

namespace {

// Section-crossing scan shared by the return-map entry points. Looks for a
// strict sign change of y across dense sub-samples of each accepted step.
template <int N, class Rhs>
bool locate_crossing(const Dopri5<N, Rhs>& stepper, int wanted_direction, double t_min,
                     SectionEvent& event, double* max_abs_y) {
  constexpr int kSubSamples = 8;
  std::array<double, N> probe;

  double theta_prev = 0.0;
  stepper.dense(0.0, probe);
  double y_prev = probe[1];
  for (int s = 1; s <= kSubSamples; ++s) {
    const double theta = static_cast<double>(s) / kSubSamples;
    stepper.dense(theta, probe);
    const double y_cur = probe[1];
    if (max_abs_y != nullptr) *max_abs_y = std::max(*max_abs_y, std::abs(y_cur));
    const int direction = y_prev > 0.0 && y_cur < 0.0 ? -1 : (y_prev < 0.0 && y_cur > 0.0 ? 1 : 0);
    if (direction == wanted_direction) {
      // bisect on the interpolant
      double lo = theta_prev, hi = theta, ylo = y_prev;
      double theta_mid = 0.5 * (lo + hi);
      for (int it = 0; it < 200; ++it) {
        theta_mid = 0.5 * (lo + hi);
        stepper.dense(theta_mid, probe);
        if (std::abs(probe[1]) <= 1e-12) break;
        if ((probe[1] > 0.0) == (ylo > 0.0)) {
          lo = theta_mid;
          ylo = probe[1];
        } else {
          hi = theta_mid;
        }
      }
      const double t_event = stepper.t_prev() + theta_mid * stepper.h_last();
      if (probe[0] > 0.0 && std::abs(t_event) > t_min) {
        event.t = t_event;
        event.state = {probe[0], probe[1]};
        event.section = SectionTag::PositiveXAxis;
        event.crossing_direction = wanted_direction;
        return true;
      }
    }
    theta_prev = theta;
    y_prev = y_cur;
  }
  return false;
}

template <int N, class Rhs>
ReturnResult run_section_return(Rhs rhs, double r, const ReturnOptions& opts) {
  if (!(r > 0.0)) throw std::invalid_argument("section_return: r must be positive");
  validate_tolerances(opts.integration);
  const double t_max = opts.t_max > 0.0 ? opts.t_max : 50.0 * kTwoPi;

  Dopri5<N, Rhs> stepper(rhs, opts.integration);
  std::array<double, N> y0{};
  y0[0] = r;
  stepper.init(0.0, y0, +1.0);

  std::array<double, N> d0{};
  rhs(y0.data(), d0.data());
  const double ydot0 = d0[1];
  if (ydot0 == 0.0) {
    throw std::invalid_argument("section_return: start point is tangent to the section");
  }
  const int wanted = ydot0 > 0.0 ? 1 : -1;

  ReturnResult result;
  result.meta.rtol = opts.integration.rtol;
  result.meta.atol = opts.integration.atol;
  if (opts.record_path) result.path.push_back({0.0, r, 0.0});

  double next_record = opts.record_dt;
  while (stepper.t() < t_max) {
    stepper.step();
    const auto& y = stepper.y();
    if (std::hypot(y[0], y[1]) > opts.integration.escape_norm) {
      throw FlowError(FlowError::Kind::Escape,
                      "orbit escaped before returning to the section (escape time estimate " +
                          std::to_string(stepper.t()) + ")",
                      stepper.t(), {y[0], y[1]});
    }
    result.max_abs_y = std::max(result.max_abs_y, std::abs(y[1]));

    SectionEvent event;
    const bool found = locate_crossing(stepper, wanted, 1e-12, event, &result.max_abs_y);
    const double t_stop = found ? event.t : stepper.t();

    if (opts.record_path) {
      std::array<double, N> probe;
      while (opts.record_dt > 0.0 && next_record < t_stop) {
        const double theta = (next_record - stepper.t_prev()) / stepper.h_last();
        if (theta >= 0.0 && theta <= 1.0) {
          stepper.dense(theta, probe);
          result.path.push_back({next_record, probe[0], probe[1]});
        }
        next_record += opts.record_dt;
      }
      if (!found) result.path.push_back({stepper.t(), y[0], y[1]});
    }

    if (found) {
      if (opts.record_path) result.path.push_back({event.t, event.state.x, event.state.y});
      if constexpr (N >= 3) {
        const double theta = (event.t - stepper.t_prev()) / stepper.h_last();
        std::array<double, N> probe;
        stepper.dense(theta, probe);
        result.div_integral = probe[2];
      }
      result.event = event;
      result.meta.steps_accepted = stepper.steps_accepted;
      result.meta.steps_rejected = stepper.steps_rejected;
      result.meta.rhs_evaluations = stepper.evals();
      return result;
    }
  }
  throw FlowError(FlowError::Kind::NoReturn,
                  "orbit did not return to the section within t_max", stepper.t(),
                  {stepper.y()[0], stepper.y()[1]});
}

}  // namespace

ReturnResult section_return(const CompiledSystem& sys, double r, const ReturnOptions& opts) {
  const double sign = opts.backward ? -1.0 : 1.0;
  if (opts.accumulate_divergence) {
    return run_section_return<3>(PlaneDivRhs{&sys, sign}, r, opts);
  }
  return run_section_return<2>(PlaneRhs{&sys, sign}, r, opts);
}

namespace {

template <int N, class Rhs>
std::array<double, N> run_to_time(Rhs rhs, std::array<double, N> y0, double dt,
                                  const IntegrationOptions& opts) {
  validate_tolerances(opts);
  if (!(dt > 0.0)) throw std::invalid_argument("advance: dt must be positive");
  Dopri5<N, Rhs> stepper(rhs, opts);
  stepper.init(0.0, y0, +1.0);
  const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, dt);
  while (dt - stepper.t() > slack) {
    stepper.clamp_next_step(dt - stepper.t());
    stepper.step();
    const auto& y = stepper.y();
    if (std::hypot(y[0], y[1]) > opts.escape_norm) {
      throw FlowError(FlowError::Kind::Escape, "orbit escaped during a fixed-time advance",
                      stepper.t(), {y[0], y[1]});
    }
  }
  return stepper.y();
}

}  // namespace

Vec2 advance(const CompiledSystem& sys, Vec2 x0, double dt, bool backward,
             const IntegrationOptions& opts) {
  const auto y = run_to_time<2>(PlaneRhs{&sys, backward ? -1.0 : 1.0}, {x0.x, x0.y}, dt, opts);
  return {y[0], y[1]};
}

AugmentedState advance_with_divergence(const CompiledSystem& sys, AugmentedState z0, double dt,
                                       bool backward, const IntegrationOptions& opts) {
  const auto y = run_to_time<3>(PlaneDivRhs{&sys, backward ? -1.0 : 1.0}, {z0.x, z0.y, z0.s}, dt,
                                opts);
  return {y[0], y[1], y[2]};
}

SectionEvent first_return(const PlanarPolySystem& sys, double r, const IntegrationOptions& opts) {
  const CompiledSystem compiled(sys);
  ReturnOptions ropts;
  ropts.integration = opts;
  return section_return(compiled, r, ropts).event;
}

std::vector<TrajectoryState> sample_orbit(const CompiledSystem& sys, Vec2 x0,
                                          const OrbitSampleOptions& opts) {
  validate_tolerances(opts.integration);
  const double sign = opts.backward ? -1.0 : 1.0;
  Dopri5<2, PlaneRhs> stepper(PlaneRhs{&sys, sign}, opts.integration);
  stepper.init(0.0, {x0.x, x0.y}, +1.0);

  std::vector<TrajectoryState> path;
  path.push_back({0.0, x0.x, x0.y});
  double next_record = opts.record_dt;
  try {
    while (stepper.t() < opts.t_max) {
      stepper.step();
      const auto& y = stepper.y();
      std::array<double, 2> probe;
      while (opts.record_dt > 0.0 && next_record < stepper.t()) {
        const double theta = (next_record - stepper.t_prev()) / stepper.h_last();
        if (theta >= 0.0 && theta <= 1.0) {
          stepper.dense(theta, probe);
          path.push_back({next_record, probe[0], probe[1]});
        }
        next_record += opts.record_dt;
      }
      const double radius = std::hypot(y[0], y[1]);
      if (radius > opts.escape_radius || radius < opts.settle_radius) break;
    }
    const auto& y = stepper.y();
    path.push_back({stepper.t(), y[0], y[1]});
  } catch (const FlowError&) {
    // orbit sampling is best-effort; keep what was collected
  }
  return path;
}

}  // namespace rayleigh
