#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace spincant {

struct OdeControls {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0;      // 0: estimate automatically
    double h_max = 0;       // 0: interval length
    long max_steps = 50'000'000;
};

struct OdeStats {
    long n_steps = 0;
    long n_accepted = 0;
    long n_rejected = 0;
    long n_rhs = 0;
    double h_last = 0;  // accepted step size at the end; reuse as h_init of the next segment

    OdeStats& operator+=(const OdeStats& o) {
        n_steps += o.n_steps;
        n_accepted += o.n_accepted;
        n_rejected += o.n_rejected;
        n_rhs += o.n_rhs;
        h_last = o.h_last;
        return *this;
    }
};

// dy/dt = f(t, y): reads y[0..n), writes dydt[0..n).
using OdeRhs = std::function<void(double t, const double* y, double* dydt)>;

// Adaptive explicit Runge-Kutta 8(5,3) (Dormand-Prince, Hairer's DOP853
// constants).  The final step is clamped to land on t1 exactly, so callers
// sample trajectories by integrating segment-by-segment between sample times.
// Work arrays are owned by the object and reused across segments.
class Dop853 {
  public:
    explicit Dop853(std::size_t n);

    // Advances y (size n) from t0 to t1 (t1 > t0).  Throws HealthError when
    // the step size underflows (stiffness) or max_steps is exceeded.
    OdeStats integrate(const OdeRhs& f, std::vector<double>& y, double t0, double t1,
                       const OdeControls& c);

  private:
    std::size_t n_;
    std::vector<double> w1_, k1_, k2_, k3_, k4_, k5_, k6_, k7_, k8_, k9_, k10_;

    void stages(const OdeRhs& f, const double* y, double t, double h);
    double error_norm(const double* y, double rtol, double atol) const;
    double initial_step(const OdeRhs& f, const double* y, double t, double hmax, double rtol,
                        double atol);
};

}  // namespace spincant
