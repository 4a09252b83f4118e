#include "gbvlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "gbvlab/parallel.hpp"

namespace gbv {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::converging: return "converging";
        case Verdict::diverging_plus: return "diverging(+inf)";
        case Verdict::diverging_minus: return "diverging(-inf)";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

struct EndState {
    double log_r = 0.0;
    double theta = 0.0;
};

EndState end_state(const Coefficients& coeffs, double eta, index_t n) {
    EndState out;
    run_prufer(coeffs, eta, n, [&](const PruferState& s) {
        if (s.n == n) {
            out.log_r = s.log_r;
            out.theta = s.theta;
        }
    });
    return out;
}

}  // namespace

MeasureProbe density_probe(const Coefficients& coeffs, index_t n, std::span<const double> grid,
                           int threads) {
    MeasureProbe probe;
    probe.model = model_of(coeffs);
    probe.n = n;
    probe.grid.assign(grid.begin(), grid.end());
    probe.density.assign(grid.size(), 0.0);

    if (probe.model == Model::opuc) {
        parallel_for_index(grid.size(), threads, [&](std::size_t i) {
            const auto s = end_state(coeffs, probe.grid[i], n);
            probe.density[i] = std::exp(-2.0 * s.log_r) / kTwoPi;
        });
    } else {
        parallel_for_index(grid.size(), threads, [&](std::size_t i) {
            const double eta = probe.grid[i];
            const auto s = end_state(coeffs, eta, n);
            // Recover a_n p_n and p_{n-1} (up to the common scale r_n) from the
            // polar representation a_n p_n - p_{n-1} e^{-i eta/2} = r_n e^{i Phi}:
            //   p_{n-1}/r_n = sin(Phi)/sin(eta/2),
            //   a_n p_n/r_n = cos(Phi) + (p_{n-1}/r_n) cos(eta/2).
            const double phi_total =
                static_cast<double>(n) * eta / 2.0 + s.theta;
            const double sh = std::sin(eta / 2.0);
            const double v = std::sin(phi_total) / sh;
            const double u = std::cos(phi_total) + v * std::cos(eta / 2.0);
            const double unit_sum = u * u + v * v;
            probe.density[i] = std::exp(-2.0 * s.log_r) / (kPi * unit_sum);
        });
    }
    return probe;
}

namespace {

double simpson_on_grid(const std::vector<double>& y, std::size_t i0, std::size_t i1,
                       std::size_t stride, double h) {
    // composite rule over [i0, i1] at the given stride; (i1-i0)/stride even
    double acc = y[i0] + y[i1];
    bool odd = true;
    for (std::size_t i = i0 + stride; i < i1; i += stride) {
        acc += y[i] * (odd ? 4.0 : 2.0);
        odd = !odd;
    }
    return acc * (h * static_cast<double>(stride)) / 3.0;
}

}  // namespace

double interval_mass(const MeasureProbe& probe, double lo, double hi) {
    if (probe.grid.size() < 3)
        throw std::invalid_argument("interval_mass: probe grid too small");
    if (hi < lo) std::swap(lo, hi);
    const double front = probe.grid.front();
    const double back = probe.grid.back();
    if (lo < front - 1e-12 || hi > back + 1e-12)
        throw std::invalid_argument("interval_mass: interval outside probe grid coverage");
    lo = std::clamp(lo, front, back);
    hi = std::clamp(hi, front, back);
    const double h = probe.grid[1] - probe.grid[0];
    for (std::size_t i = 1; i + 1 < probe.grid.size(); ++i) {
        if (std::abs((probe.grid[i + 1] - probe.grid[i]) - h) > 1e-9 * std::max(1.0, h))
            throw std::invalid_argument("interval_mass: probe grid must be uniform");
    }

    auto density_at = [&](double x) {
        const double t = std::clamp((x - front) / h, 0.0,
                                    static_cast<double>(probe.grid.size() - 1));
        const auto i = std::min(static_cast<std::size_t>(t), probe.grid.size() - 2);
        const double frac = t - static_cast<double>(i);
        return probe.density[i] * (1.0 - frac) + probe.density[i + 1] * frac;
    };

    // interior grid points and linearly interpolated partial end cells
    auto i_lo = static_cast<std::ptrdiff_t>(std::ceil((lo - front) / h - 1e-9));
    auto i_hi = static_cast<std::ptrdiff_t>(std::floor((hi - front) / h + 1e-9));
    i_lo = std::clamp<std::ptrdiff_t>(i_lo, 0, static_cast<std::ptrdiff_t>(probe.grid.size()) - 1);
    i_hi = std::clamp<std::ptrdiff_t>(i_hi, 0, static_cast<std::ptrdiff_t>(probe.grid.size()) - 1);
    if (i_hi < i_lo) {
        // the interval sits inside one cell
        return 0.5 * (density_at(lo) + density_at(hi)) * (hi - lo);
    }
    std::size_t i0 = static_cast<std::size_t>(i_lo);
    std::size_t i1 = static_cast<std::size_t>(i_hi);
    double corrections = 0.0;
    if (probe.grid[i0] - lo > 1e-12)
        corrections += 0.5 * (density_at(lo) + probe.density[i0]) * (probe.grid[i0] - lo);
    if (hi - probe.grid[i1] > 1e-12)
        corrections += 0.5 * (probe.density[i1] + density_at(hi)) * (hi - probe.grid[i1]);

    if (i1 == i0) return corrections;
    const std::size_t count = i1 - i0;

    // Composite Simpson over the maximal even prefix at each stride, with the
    // remainder closed by fine-grid trapezoid cells; converged when two
    // successive stride refinements agree.
    auto estimate = [&](std::size_t s) {
        const std::size_t panels = (count / s) / 2;
        const std::size_t end = i0 + panels * 2 * s;
        double e = simpson_on_grid(probe.density, i0, end, s, h);
        for (std::size_t i = end; i < i1; ++i)
            e += 0.5 * (probe.density[i] + probe.density[i + 1]) * h;
        return e;
    };
    std::vector<std::size_t> strides;
    for (std::size_t s = 1; count / s >= 2; s *= 2) strides.push_back(s);
    std::sort(strides.rbegin(), strides.rend());
    double prev = std::numeric_limits<double>::quiet_NaN();
    double cur = 0.0;
    for (std::size_t s : strides) {
        cur = estimate(s);
        if (!std::isnan(prev) && std::abs(cur - prev) < 1e-8) return corrections + cur;
        prev = cur;
    }
    if (strides.size() < 2) {
        // resolution floor: accept if Simpson and trapezoid already agree
        double trap = 0.0;
        for (std::size_t i = i0; i < i1; ++i)
            trap += 0.5 * (probe.density[i] + probe.density[i + 1]) * h;
        cur = estimate(1);
        if (std::abs(cur - trap) < 1e-8) return corrections + cur;
    }
    throw ResolutionError("interval_mass: refinement did not reach 1e-8 on this grid",
                          corrections + cur);
}

ConvergenceReport convergence_diagnostic(const Coefficients& coeffs, double interval_lo,
                                         double interval_hi, int grid_points,
                                         std::span<const index_t> checkpoints, int threads) {
    if (grid_points < 2)
        throw std::invalid_argument("convergence_diagnostic: need at least 2 grid points");
    if (checkpoints.size() < 2)
        throw std::invalid_argument("convergence_diagnostic: need at least 2 checkpoints");
    std::vector<index_t> cps(checkpoints.begin(), checkpoints.end());
    std::sort(cps.begin(), cps.end());

    ConvergenceReport report;
    report.interval_lo = interval_lo;
    report.interval_hi = interval_hi;
    report.checkpoints = cps;

    const std::size_t n_grid = static_cast<std::size_t>(grid_points);
    const std::size_t n_cp = cps.size();
    std::vector<double> grid(n_grid);
    const double step = (interval_hi - interval_lo) / static_cast<double>(n_grid - 1);
    for (std::size_t i = 0; i < n_grid; ++i)
        grid[i] = interval_lo + step * static_cast<double>(i);

    // log r at every checkpoint for every grid point
    std::vector<double> lr(n_grid * n_cp, 0.0);
    const index_t n_max = cps.back();
    parallel_for_index(n_grid, threads, [&](std::size_t gi) {
        std::size_t next_cp = 0;
        run_prufer(coeffs, grid[gi], n_max, [&](const PruferState& s) {
            while (next_cp < n_cp && s.n == cps[next_cp]) {
                lr[gi * n_cp + next_cp] = s.log_r;
                ++next_cp;
            }
        });
    });

    report.sup_tail_osc.assign(n_cp, 0.0);
    std::vector<double> tail_osc_last(n_grid, 0.0);  // per-eta osc over the last two checkpoints
    for (std::size_t ci = 0; ci < n_cp; ++ci) {
        double sup = 0.0;
        for (std::size_t gi = 0; gi < n_grid; ++gi) {
            double mn = lr[gi * n_cp + ci], mx = mn;
            for (std::size_t cj = ci; cj < n_cp; ++cj) {
                mn = std::min(mn, lr[gi * n_cp + cj]);
                mx = std::max(mx, lr[gi * n_cp + cj]);
            }
            sup = std::max(sup, mx - mn);
            if (ci + 2 == n_cp) tail_osc_last[gi] = mx - mn;
        }
        report.sup_tail_osc[ci] = sup;
    }

    // Finite-grid safety margin: how much the tail oscillation itself moves
    // between adjacent grid points.
    double margin = 0.0;
    for (std::size_t gi = 0; gi + 1 < n_grid; ++gi)
        margin = std::max(margin, std::abs(tail_osc_last[gi + 1] - tail_osc_last[gi]));
    report.grid_margin = margin;

    const double last_osc = report.sup_tail_osc[n_cp - 2];
    if (last_osc + margin < kConvergenceOscThreshold) {
        report.verdict = Verdict::converging;
        return report;
    }

    // Divergence: |log r| at the final checkpoint grows monotonically across
    // checkpoints with one sign over the whole grid.
    bool all_pos = true, all_neg = true;
    for (std::size_t gi = 0; gi < n_grid; ++gi) {
        const double v = lr[gi * n_cp + (n_cp - 1)];
        all_pos = all_pos && v > 0.0;
        all_neg = all_neg && v < 0.0;
    }
    if (all_pos || all_neg) {
        bool monotone = true;
        for (std::size_t ci = 0; ci + 1 < n_cp; ++ci) {
            double min_abs_cur = std::numeric_limits<double>::infinity();
            double min_abs_next = std::numeric_limits<double>::infinity();
            for (std::size_t gi = 0; gi < n_grid; ++gi) {
                min_abs_cur = std::min(min_abs_cur, std::abs(lr[gi * n_cp + ci]));
                min_abs_next = std::min(min_abs_next, std::abs(lr[gi * n_cp + ci + 1]));
            }
            monotone = monotone && min_abs_next > min_abs_cur;
        }
        if (monotone) {
            report.verdict = all_pos ? Verdict::diverging_plus : Verdict::diverging_minus;
            return report;
        }
    }
    report.verdict = Verdict::inconclusive;
    return report;
}

namespace {

struct SlopeFit {
    double slope = 0.0;
    double ci = 0.0;
};

// OLS fit of log r_n against log n over n in [N/10, N], accumulated streaming.
SlopeFit fit_drift(const Coefficients& coeffs, double eta, index_t N) {
    const index_t lo = std::max<index_t>(1, N / 10);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    long m = 0;
    run_prufer(coeffs, eta, N, [&](const PruferState& s) {
        if (s.n < lo) return;
        const double x = std::log(static_cast<double>(s.n));
        const double y = s.log_r;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        ++m;
    });
    SlopeFit fit;
    const double dm = static_cast<double>(m);
    const double vxx = sxx - sx * sx / dm;
    const double vxy = sxy - sx * sy / dm;
    const double vyy = syy - sy * sy / dm;
    fit.slope = vxy / vxx;
    const double ssr = std::max(0.0, vyy - fit.slope * vxy);
    const double sigma2 = m > 2 ? ssr / static_cast<double>(m - 2) : 0.0;
    fit.ci = 1.96 * std::sqrt(sigma2 / vxx);
    return fit;
}

}  // namespace

ResonanceScan resonance_scan(const Coefficients& coeffs, const ExceptionalSet& candidates,
                             std::span<const double> control_offsets, index_t N,
                             int threads) {
    if (N < 100) throw std::invalid_argument("resonance_scan: N too small for a drift fit");
    const Model model = model_of(coeffs);
    if (model != candidates.model)
        throw std::invalid_argument("resonance_scan: candidate set is for the other model");

    ResonanceScan scan;
    scan.N = N;
    for (const auto& pt : candidates.points) {
        ResonancePointReport base;
        base.eta = pt.eta;
        base.point = model == Model::oprl ? pt.point_re : pt.eta;
        base.is_candidate = true;
        scan.points.push_back(base);
        for (double off : control_offsets) {
            ResonancePointReport ctl;
            ctl.eta = wrap_two_pi(pt.eta + off);
            ctl.point = model == Model::oprl ? 2.0 * std::cos(ctl.eta / 2.0) : ctl.eta;
            ctl.is_candidate = false;
            scan.points.push_back(ctl);
        }
    }

    parallel_for_index(scan.points.size(), threads, [&](std::size_t i) {
        auto& entry = scan.points[i];
        if (model == Model::oprl && std::abs(wrap_pm_pi(entry.eta)) < 1e-9) {
            entry.skipped = true;
            entry.note = "eta at the band edge singularity";
            return;
        }
        try {
            const auto fit = fit_drift(coeffs, entry.eta, N);
            entry.slope = fit.slope;
            entry.slope_ci = fit.ci;
        } catch (const std::exception& e) {
            entry.skipped = true;
            entry.note = e.what();
        }
    });
    return scan;
}

}  // namespace gbv
