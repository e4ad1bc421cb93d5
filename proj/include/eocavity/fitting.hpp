#pragma once

#include <optional>
#include <string>
#include <vector>

namespace eocavity {

// A measured or synthetic spectrum: strictly increasing frequencies (Hz) and
// linear-magnitude values, at least 8 points.
struct Trace {
    std::vector<double> freq;
    std::vector<double> value;
    std::string label;

    void validate() const;
};

// Result of a nonlinear least-squares fit. params follows param_names;
// covariance is row-major n x n, symmetric positive semidefinite, expressed
// in the linear parameter space. condition_number reports the normal-equation
// conditioning at the solution (a very large value flags a degenerate or
// near-degenerate parameter combination).
struct FitResult {
    std::vector<std::string> param_names;
    std::vector<double> params;
    std::vector<double> covariance;
    double residual_norm = 0.0;
    bool converged = false;
    int iterations = 0;
    double condition_number = 0.0;
    std::string message;

    double param(const std::string& name) const;
};

struct LineshapeGuess {
    double gain = 1.0;
    double C = 0.01;
    double kappa_o = 0.0;   // Hz
    double kappa_m = 0.0;   // Hz
    double omega_m = 0.0;   // Hz
    double delta_op = 0.0;  // Hz
};

// Box bounds for the lineshape fit. Scale parameters (gain, C, kappa_o,
// kappa_m) are bounded multiplicatively around the initial guess; location
// parameters (omega_m, delta_op) must bracket the trace window.
struct LineshapeBounds {
    double scale_lo = 1e-3;    // lower bound = guess * scale_lo
    double scale_hi = 1e3;     // upper bound = guess * scale_hi
    double location_pad = 0.0; // Hz beyond the trace window; 0 = one window width
};

// Levenberg-Marquardt fit of gain * eta(w; C, kappa_o, kappa_m, omega_m,
// delta_op) to a trace, minimizing the unweighted sum of squared residuals.
// Rates and gain iterate in log space; locations iterate linearly. The
// Jacobian is central finite differences with relative step 1e-6. Iteration
// stops when the gradient norm falls below 1e-10 times the initial residual
// norm, or at 500 iterations (converged = false).
//
// coupling_scale, when given, is the independently calibrated combination
// K = C * kappa_o * kappa_m (Hz^2): C is then derived as K/(kappa_o kappa_m)
// rather than fitted. Without it all six parameters float, and the model has
// an exact gain/C gauge degeneracy at the triply resonant point: the trace
// does not determine gain and C separately (the covariance and condition
// number report this). Documented well-posed ranges for the calibrated form:
// gain in [0.1, 10], C in [0.005, 0.5], kappa_o in [3, 8] MHz, kappa_m in
// [5, 20] MHz, locations within +-10 MHz of the trace center.
//
// Singular normal equations raise ModelError with a condition-number report.
FitResult fit_lineshape(const Trace& trace, const LineshapeGuess& initial,
                        const LineshapeBounds& bounds = {},
                        std::optional<double> coupling_scale = std::nullopt);

struct NmsGuess {
    double center = 0.0;     // Hz
    double splitting = 0.0;  // Hz
    double kappa = 0.0;      // Hz, shared width
    double weight_low = 0.5;
    double weight_high = 0.5;
};

// Fits a sum of two equal-width Lorentzians at center -+ splitting/2 with
// free amplitude weights. Same engine and stopping rule as fit_lineshape;
// splitting, kappa, and weights iterate in log space. A splitting collapsing
// to zero leaves the two amplitude columns degenerate, which surfaces as a
// near-singular covariance (large condition_number).
FitResult fit_nms(const Trace& trace, const NmsGuess& initial);

// Initial NMS guesses from the trace itself: half-maximum clustering for the
// peak positions, peak height for the weights.
NmsGuess nms_guess_from_trace(const Trace& trace);

}  // namespace eocavity
