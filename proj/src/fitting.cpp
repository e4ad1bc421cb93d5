#include "eocavity/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>

#include "eocavity/errors.hpp"

namespace eocavity {

void Trace::validate() const {
    if (freq.size() != value.size()) throw ConfigError("trace: freq/value length mismatch");
    if (freq.size() < 8) throw ConfigError("trace: need at least 8 samples");
    for (std::size_t i = 0; i < freq.size(); ++i) {
        if (!std::isfinite(freq[i]) || !std::isfinite(value[i]))
            throw ConfigError("trace: non-finite sample");
        if (i > 0 && !(freq[i] > freq[i - 1]))
            throw ConfigError("trace: frequencies must be strictly increasing");
    }
}

double FitResult::param(const std::string& name) const {
    for (std::size_t i = 0; i < param_names.size(); ++i)
        if (param_names[i] == name) return params[i];
    throw ConfigError("fit result: unknown parameter name '" + name + "'");
}

namespace {

// ---- small dense symmetric linear algebra (problems are 5-7 parameters) ----

using Vec = std::vector<double>;
using Mat = std::vector<double>;  // row-major n x n

bool solve_linear(Mat A, Vec b, Vec& x) {
    const std::size_t n = b.size();
    x.assign(n, 0.0);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
        if (A[piv * n + col] == 0.0) return false;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A[piv * n + c], A[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        const double d = A[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r * n + col] / d;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t ri = n; ri-- > 0;) {
        double s = b[ri];
        for (std::size_t c = ri + 1; c < n; ++c) s -= A[ri * n + c] * x[c];
        x[ri] = s / A[ri * n + ri];
        if (!std::isfinite(x[ri])) return false;
    }
    return true;
}

// Cyclic Jacobi eigendecomposition of a symmetric matrix; A's eigenvectors
// land in the columns of V.
void jacobi_eigen(Mat A, std::size_t n, Vec& eigvals, Mat& V) {
    V.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) V[i * n + i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += A[i * n + j] * A[i * n + j];
        if (off < 1e-300) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A[p * n + q];
                if (apq == 0.0) continue;
                const double app = A[p * n + p], aqq = A[q * n + q];
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = A[k * n + p], akq = A[k * n + q];
                    A[k * n + p] = c * akp - s * akq;
                    A[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = A[p * n + k], aqk = A[q * n + k];
                    A[p * n + k] = c * apk - s * aqk;
                    A[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = V[k * n + p], vkq = V[k * n + q];
                    V[k * n + p] = c * vkp - s * vkq;
                    V[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    eigvals.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) eigvals[i] = A[i * n + i];
}

// ---- Levenberg-Marquardt core over transformed (u) parameters ----

struct LmProblem {
    // Model over linear-space parameters, evaluated on the trace grid.
    std::function<void(const Vec& theta, Vec& out)> model;
    std::vector<bool> log_scale;  // per parameter: iterate on log(theta)
    Vec lower, upper;             // linear-space box bounds
    Vec fd_floor;                 // u-space step floor per parameter
    std::vector<std::string> names;
};

Vec to_u(const LmProblem& prob, const Vec& theta) {
    Vec u(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        if (prob.log_scale[j]) {
            if (!(theta[j] > 0.0))
                throw ConfigError("fit: parameter '" + prob.names[j] +
                                  "' must be positive (log-scaled)");
            u[j] = std::log(theta[j]);
        } else {
            u[j] = theta[j];
        }
    }
    return u;
}

Vec from_u(const LmProblem& prob, const Vec& u) {
    Vec theta(u.size());
    for (std::size_t j = 0; j < u.size(); ++j)
        theta[j] = prob.log_scale[j] ? std::exp(u[j]) : u[j];
    return theta;
}

void clamp_u(const LmProblem& prob, Vec& u) {
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double lo = prob.log_scale[j] ? std::log(prob.lower[j]) : prob.lower[j];
        const double hi = prob.log_scale[j] ? std::log(prob.upper[j]) : prob.upper[j];
        u[j] = std::clamp(u[j], lo, hi);
    }
}

FitResult lm_fit(const Trace& trace, const LmProblem& prob, const Vec& theta0,
                 int max_iter = 500) {
    const std::size_t n = trace.freq.size();
    const std::size_t k = theta0.size();
    Vec u = to_u(prob, theta0);
    clamp_u(prob, u);

    Vec pred(n);
    auto residual = [&](const Vec& uu, Vec& r) {
        prob.model(from_u(prob, uu), pred);
        r.resize(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = pred[i] - trace.value[i];
    };

    Vec r;
    residual(u, r);
    double cost = 0.0;
    for (double ri : r) cost += ri * ri;
    const double r0_norm = std::sqrt(cost);
    const double gtol = 1e-10 * r0_norm;

    FitResult result;
    result.param_names = prob.names;

    double lambda = 1e-3;
    int iter = 0;
    bool converged = false;
    std::string message;
    Mat J(n * k);
    Vec grad(k), A(k * k);

    for (iter = 0; iter < max_iter; ++iter) {
        // Central finite differences with relative step 1e-6 in the
        // transformed coordinates.
        for (std::size_t j = 0; j < k; ++j) {
            const double h = 1e-6 * std::max(std::abs(u[j]), prob.fd_floor[j]);
            Vec up = u, um = u;
            up[j] += h;
            um[j] -= h;
            Vec rp, rm;
            residual(up, rp);
            residual(um, rm);
            for (std::size_t i = 0; i < n; ++i) J[i * k + j] = (rp[i] - rm[i]) / (2.0 * h);
        }
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += J[i * k + j] * r[i];
            grad[j] = s;
        }
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a; b < k; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += J[i * k + a] * J[i * k + b];
                A[a * k + b] = s;
                A[b * k + a] = s;
            }
        // A parameter with exactly zero influence over the trace makes the
        // problem meaningless no matter how small the gradient is, so this
        // check precedes the convergence test.
        std::string dead;
        for (std::size_t j = 0; j < k; ++j)
            if (A[j * k + j] == 0.0) {
                if (!dead.empty()) dead += ", ";
                dead += prob.names[j];
            }
        if (!dead.empty()) {
            Vec ev;
            Mat V;
            jacobi_eigen(A, k, ev, V);
            const double emax = *std::max_element(ev.begin(), ev.end());
            const double emin = *std::min_element(ev.begin(), ev.end());
            std::ostringstream msg;
            msg << "fit: singular normal equations (" << dead
                << " has no influence); condition number ";
            if (emin > 0.0)
                msg << emax / emin;
            else
                msg << "infinite (eigenvalue range [" << emin << ", " << emax << "])";
            throw ModelError(msg.str());
        }
        double gnorm = 0.0;
        for (double g : grad) gnorm += g * g;
        gnorm = std::sqrt(gnorm);
        if (gnorm <= gtol) {
            converged = true;
            message = "gradient below tolerance";
            break;
        }

        bool accepted = false;
        while (lambda <= 1e16) {
            Mat Areg = A;
            for (std::size_t j = 0; j < k; ++j) Areg[j * k + j] += lambda * A[j * k + j];
            Vec negg(k), step;
            for (std::size_t j = 0; j < k; ++j) negg[j] = -grad[j];
            if (!solve_linear(Areg, negg, step)) {
                lambda *= 10.0;
                continue;
            }
            Vec u_try = u;
            for (std::size_t j = 0; j < k; ++j) u_try[j] += step[j];
            clamp_u(prob, u_try);
            Vec r_try;
            residual(u_try, r_try);
            double cost_try = 0.0;
            for (double ri : r_try) cost_try += ri * ri;
            if (std::isfinite(cost_try) && cost_try < cost) {
                u = u_try;
                r = r_try;
                cost = cost_try;
                lambda = std::max(lambda * 0.2, 1e-14);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) {
            message = "step search stalled (no descent direction within damping range)";
            break;
        }
    }
    if (!converged && message.empty())
        message = "iteration limit reached before the gradient tolerance";

    // Covariance in the linear parameter space: sigma^2 (J^T J)^+ scaled by
    // d(theta)/d(u), eigenvalue-clamped so the reported matrix is PSD.
    {
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a; b < k; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += J[i * k + a] * J[i * k + b];
                A[a * k + b] = s;
                A[b * k + a] = s;
            }
        Vec ev;
        Mat V;
        jacobi_eigen(A, k, ev, V);
        const double emax = std::max(*std::max_element(ev.begin(), ev.end()), 0.0);
        double emin_pos = emax;
        for (double e : ev)
            if (e > 0.0) emin_pos = std::min(emin_pos, e);
        result.condition_number =
            emax > 0.0 ? emax / std::max(emin_pos, emax * 1e-300) : std::nan("");
        const double dof = n > k ? static_cast<double>(n - k) : 1.0;
        const double sigma2 = cost / dof;
        const double floor = emax * 1e-14;
        Mat cov_u(k * k, 0.0);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) {
                double s = 0.0;
                for (std::size_t m = 0; m < k; ++m) {
                    if (ev[m] <= floor) continue;  // degenerate directions excluded
                    s += V[a * k + m] * V[b * k + m] / ev[m];
                }
                cov_u[a * k + b] = sigma2 * s;
            }
        const Vec theta = from_u(prob, u);
        result.covariance.assign(k * k, 0.0);
        for (std::size_t a = 0; a < k; ++a) {
            const double da = prob.log_scale[a] ? theta[a] : 1.0;
            for (std::size_t b = 0; b < k; ++b) {
                const double db = prob.log_scale[b] ? theta[b] : 1.0;
                result.covariance[a * k + b] = da * cov_u[a * k + b] * db;
            }
        }
    }

    result.params = from_u(prob, u);
    result.residual_norm = std::sqrt(cost);
    result.converged = converged;
    result.iterations = iter;
    result.message = message;
    return result;
}

// Normalized transduction lineshape: 4C / |C + (1 + 2i a)(1 + 2i b)|^2. The
// fitted gain bundles every flat amplitude factor (coupling ratios, detector
// gain), so a raw efficiency trace fits with gain = ratio_o * ratio_m.
double lineshape(double w, double gain, double C, double ko, double km, double wm,
                 double dop) {
    const std::complex<double> bo(1.0, 2.0 * (dop - w) / ko);
    const std::complex<double> bm(1.0, 2.0 * (wm - w) / km);
    return gain * 4.0 * C / std::norm(C + bo * bm);
}

}  // namespace

FitResult fit_lineshape(const Trace& trace, const LineshapeGuess& initial,
                        const LineshapeBounds& bounds,
                        std::optional<double> coupling_scale) {
    trace.validate();
    if (!(initial.gain > 0.0 && initial.C > 0.0 && initial.kappa_o > 0.0 &&
          initial.kappa_m > 0.0))
        throw ConfigError("fit_lineshape: scale guesses must be positive");
    if (coupling_scale && !(*coupling_scale > 0.0))
        throw ConfigError("fit_lineshape: coupling scale must be positive");

    const double f_lo = trace.freq.front();
    const double f_hi = trace.freq.back();
    const double span = f_hi - f_lo;
    const double pad = bounds.location_pad > 0.0 ? bounds.location_pad : span;

    LmProblem prob;
    const bool constrained = coupling_scale.has_value();
    const double K = constrained ? *coupling_scale : 0.0;
    if (constrained) {
        prob.names = {"gain", "kappa_o", "kappa_m", "omega_m", "delta_op"};
        prob.log_scale = {true, true, true, false, false};
        prob.lower = {initial.gain * bounds.scale_lo, initial.kappa_o * bounds.scale_lo,
                      initial.kappa_m * bounds.scale_lo, f_lo - pad, f_lo - pad};
        prob.upper = {initial.gain * bounds.scale_hi, initial.kappa_o * bounds.scale_hi,
                      initial.kappa_m * bounds.scale_hi, f_hi + pad, f_hi + pad};
        prob.fd_floor = {1.0, 1.0, 1.0, span, span};
        prob.model = [K, &trace](const Vec& th, Vec& out) {
            const double C = K / (th[1] * th[2]);
            out.resize(trace.freq.size());
            for (std::size_t i = 0; i < trace.freq.size(); ++i)
                out[i] = lineshape(trace.freq[i], th[0], C, th[1], th[2], th[3], th[4]);
        };
    } else {
        prob.names = {"gain", "C", "kappa_o", "kappa_m", "omega_m", "delta_op"};
        prob.log_scale = {true, true, true, true, false, false};
        prob.lower = {initial.gain * bounds.scale_lo, initial.C * bounds.scale_lo,
                      initial.kappa_o * bounds.scale_lo, initial.kappa_m * bounds.scale_lo,
                      f_lo - pad, f_lo - pad};
        prob.upper = {initial.gain * bounds.scale_hi, initial.C * bounds.scale_hi,
                      initial.kappa_o * bounds.scale_hi, initial.kappa_m * bounds.scale_hi,
                      f_hi + pad, f_hi + pad};
        prob.fd_floor = {1.0, 1.0, 1.0, 1.0, span, span};
        prob.model = [&trace](const Vec& th, Vec& out) {
            out.resize(trace.freq.size());
            for (std::size_t i = 0; i < trace.freq.size(); ++i)
                out[i] = lineshape(trace.freq[i], th[0], th[1], th[2], th[3], th[4], th[5]);
        };
    }

    Vec theta0;
    if (constrained)
        theta0 = {initial.gain, initial.kappa_o, initial.kappa_m, initial.omega_m,
                  initial.delta_op};
    else
        theta0 = {initial.gain, initial.C, initial.kappa_o, initial.kappa_m,
                  initial.omega_m, initial.delta_op};

    FitResult res = lm_fit(trace, prob, theta0);

    // The lineshape is invariant under exchanging the two resonator factors
    // (kappa_o, delta_op) <-> (kappa_m, omega_m): the product of the bracketed
    // terms is unchanged, so both labelings reproduce the data identically and
    // the trace alone can never pick one.  Resolve the ambiguity toward the
    // caller's initial guess, provided the relabeled point stays inside the
    // search box.
    {
        const std::size_t ik_o = constrained ? 1 : 2;
        const std::size_t ik_m = ik_o + 1, iw_m = ik_m + 1, id_op = iw_m + 1;
        auto dist = [&](double ko, double km, double wm, double dop) {
            return std::abs(std::log(ko / initial.kappa_o)) +
                   std::abs(std::log(km / initial.kappa_m)) +
                   std::abs(wm - initial.omega_m) / initial.kappa_m +
                   std::abs(dop - initial.delta_op) / initial.kappa_o;
        };
        const double ko = res.params[ik_o], km = res.params[ik_m];
        const double wm = res.params[iw_m], dop = res.params[id_op];
        const bool in_box = km >= prob.lower[ik_o] && km <= prob.upper[ik_o] &&
                            ko >= prob.lower[ik_m] && ko <= prob.upper[ik_m] &&
                            dop >= prob.lower[iw_m] && dop <= prob.upper[iw_m] &&
                            wm >= prob.lower[id_op] && wm <= prob.upper[id_op];
        if (in_box && dist(km, ko, dop, wm) < dist(ko, km, wm, dop)) {
            std::swap(res.params[ik_o], res.params[ik_m]);
            std::swap(res.params[iw_m], res.params[id_op]);
            const std::size_t k = res.params.size();
            std::vector<std::size_t> perm(k);
            for (std::size_t i = 0; i < k; ++i) perm[i] = i;
            std::swap(perm[ik_o], perm[ik_m]);
            std::swap(perm[iw_m], perm[id_op]);
            Mat cov(k * k);
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b)
                    cov[a * k + b] = res.covariance[perm[a] * k + perm[b]];
            res.covariance = std::move(cov);
        }
    }

    if (constrained) {
        // Report the standard six parameters with C derived from the
        // calibrated coupling scale; covariance mapped by the chain rule.
        const double gain = res.params[0], ko = res.params[1], km = res.params[2];
        const double C = K / (ko * km);
        const std::size_t k5 = 5, k6 = 6;
        std::vector<double> S(k6 * k5, 0.0);  // d(theta6)/d(theta5)
        S[0 * k5 + 0] = 1.0;                  // gain
        S[1 * k5 + 1] = -C / ko;              // C via kappa_o
        S[1 * k5 + 2] = -C / km;              // C via kappa_m
        S[2 * k5 + 1] = 1.0;                  // kappa_o
        S[3 * k5 + 2] = 1.0;                  // kappa_m
        S[4 * k5 + 3] = 1.0;                  // omega_m
        S[5 * k5 + 4] = 1.0;                  // delta_op
        std::vector<double> cov6(k6 * k6, 0.0);
        for (std::size_t a = 0; a < k6; ++a)
            for (std::size_t b = 0; b < k6; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < k5; ++i)
                    for (std::size_t j = 0; j < k5; ++j)
                        s += S[a * k5 + i] * res.covariance[i * k5 + j] * S[b * k5 + j];
                cov6[a * k6 + b] = s;
            }
        res.param_names = {"gain", "C", "kappa_o", "kappa_m", "omega_m", "delta_op"};
        res.params = {gain, C, ko, km, res.params[3], res.params[4]};
        res.covariance = std::move(cov6);
        res.message += "; cooperativity derived from the calibrated coupling scale";
    } else {
        res.message +=
            "; all six parameters free: gain and C share a gauge direction at triple "
            "resonance and are not separately determined by the trace";
    }
    return res;
}

FitResult fit_nms(const Trace& trace, const NmsGuess& initial) {
    trace.validate();
    if (!(initial.splitting > 0.0 && initial.kappa > 0.0 && initial.weight_low > 0.0 &&
          initial.weight_high > 0.0))
        throw ConfigError("fit_nms: splitting, width, and weights must start positive");

    const double f_lo = trace.freq.front();
    const double f_hi = trace.freq.back();
    const double span = f_hi - f_lo;
    const double grid = span / static_cast<double>(trace.freq.size() - 1);
    double vscale = 0.0;
    for (double v : trace.value) vscale = std::max(vscale, std::abs(v));
    if (!(vscale > 0.0))
        throw ConfigError("fit_nms: trace values are identically zero");

    LmProblem prob;
    prob.names = {"center", "splitting", "kappa_o", "weight_low", "weight_high"};
    prob.log_scale = {false, true, true, true, true};
    // Weight bounds scale with the data so a weight pinned at the floor still
    // influences the model above double rounding (keeps the normal equations
    // regular when one peak nearly vanishes).
    prob.lower = {f_lo - span, span * 1e-9, grid * 1e-3, 1e-9 * vscale, 1e-9 * vscale};
    prob.upper = {f_hi + span, 4.0 * span, 4.0 * span, 1e6 * vscale, 1e6 * vscale};
    prob.fd_floor = {span, 1.0, 1.0, 1.0, 1.0};
    prob.model = [&trace](const Vec& th, Vec& out) {
        const double c = th[0], s = th[1], kap = th[2], wl = th[3], wh = th[4];
        const double half = kap / 2.0;
        out.resize(trace.freq.size());
        for (std::size_t i = 0; i < trace.freq.size(); ++i) {
            // Subtract the two near-equal carrier frequencies before applying
            // the (much smaller) half-splitting: w - (c - s/2) loses the
            // splitting below the rounding grain of the carrier.
            const double x = trace.freq[i] - c;
            const double dl = x + s / 2.0;
            const double dh = x - s / 2.0;
            out[i] = wl * half * half / (dl * dl + half * half) +
                     wh * half * half / (dh * dh + half * half);
        }
    };

    const Vec theta0 = {initial.center, initial.splitting, initial.kappa,
                        initial.weight_low, initial.weight_high};
    FitResult res = lm_fit(trace, prob, theta0);
    if (res.condition_number > 1e12)
        res.message += "; near-singular covariance (peaks unresolved or degenerate)";
    return res;
}

NmsGuess nms_guess_from_trace(const Trace& trace) {
    trace.validate();
    const std::size_t n = trace.freq.size();
    double peak = trace.value[0];
    for (double v : trace.value) peak = std::max(peak, v);
    if (!(peak > 0.0)) throw ModelError("nms guess: trace has no positive peak");

    // Strict interior local maxima, tallest first.  A doublet with unequal
    // peaks still shows two maxima even when the smaller sits below half of
    // the taller, which a global half-maximum threshold would miss.
    std::vector<std::size_t> maxima;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (trace.value[i] > trace.value[i - 1] && trace.value[i] >= trace.value[i + 1])
            maxima.push_back(i);
    if (maxima.empty()) throw ModelError("nms guess: trace has no interior maximum");
    std::sort(maxima.begin(), maxima.end(),
              [&](std::size_t a, std::size_t b) { return trace.value[a] > trace.value[b]; });

    // Secondary peak: the tallest other maximum separated from the primary by
    // a genuine dip, so shoulder ripples on one peak do not count.
    const std::size_t i1 = maxima[0];
    std::size_t i2 = i1;
    for (std::size_t m = 1; m < maxima.size(); ++m) {
        const std::size_t cand = maxima[m];
        const std::size_t lo = std::min(i1, cand), hi = std::max(i1, cand);
        double valley = trace.value[lo];
        for (std::size_t i = lo; i <= hi; ++i) valley = std::min(valley, trace.value[i]);
        if (valley < 0.8 * trace.value[cand]) {
            i2 = cand;
            break;
        }
    }

    // Full width of the primary peak at half its own height.
    auto half_width = [&](std::size_t ip) {
        const double h = trace.value[ip];
        std::size_t l = ip, r = ip;
        while (l > 0 && trace.value[l] > 0.5 * h) --l;
        while (r + 1 < n && trace.value[r] > 0.5 * h) ++r;
        return trace.freq[r] - trace.freq[l];
    };

    const double span = trace.freq.back() - trace.freq.front();
    NmsGuess g;
    g.kappa = std::max(half_width(i1), span / 200.0);
    if (i2 == i1) {
        // Single bump: start slightly split around it.
        g.center = trace.freq[i1];
        g.splitting = span / 50.0;
        g.weight_low = peak;
        g.weight_high = peak;
    } else {
        const std::size_t lo = std::min(i1, i2), hi = std::max(i1, i2);
        g.center = 0.5 * (trace.freq[lo] + trace.freq[hi]);
        g.splitting = trace.freq[hi] - trace.freq[lo];
        g.weight_low = trace.value[lo];
        g.weight_high = trace.value[hi];
    }
    return g;
}

}  // namespace eocavity
