#include "nlrd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlrd {

namespace {

struct LinFit {
    double slope, intercept, r_squared;
};

LinFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw std::invalid_argument("fit: degenerate abscissae");
    LinFit f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += e * e;
    }
    f.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
    return f;
}

}  // namespace

DecayFit fit_series(const std::vector<double>& times, const std::vector<double>& values,
                    double k, double t_lo, double t_hi, double predicted_slope) {
    if (times.size() != values.size())
        throw std::invalid_argument("fit_series: length mismatch");
    std::vector<double> lx, ly;
    for (size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi || times[i] <= 0.0) continue;
        if (!(values[i] > 0.0))
            throw std::invalid_argument("fit_series: non-positive value in window (log undefined)");
        lx.push_back(std::log(times[i]));
        ly.push_back(std::log(values[i]));
    }
    if (lx.size() < 10)
        throw std::invalid_argument("fit_series: window holds fewer than 10 samples");
    const LinFit f = least_squares(lx, ly);
    DecayFit out;
    out.k = k;
    out.t_lo = t_lo;
    out.t_hi = t_hi;
    out.slope = f.slope;
    out.intercept = f.intercept;
    out.r_squared = f.r_squared;
    out.predicted_slope = predicted_slope;
    return out;
}

DecayFit fit_decay(const RunRecord& rec, double k, double t_lo, double t_hi) {
    const double alpha = rec.config.alpha;
    const double predicted = -(k - 1.0) / (k * (alpha - 1.0));
    return fit_series(rec.times, rec.lk(k), k, t_lo, t_hi, predicted);
}

double l2_decay_envelope(const RunRecord& rec, double eta0, double m0_cap) {
    if (!(eta0 > 0.0))
        throw std::invalid_argument("l2_decay_envelope: requires the eta0 > 0 regime");
    (void)m0_cap;  // constants are never asserted numerically, only the shape
    if (!rec.has_lk(2.0))
        throw std::invalid_argument("l2_decay_envelope: L^2 series not recorded");
    const auto& l2 = rec.lk(2.0);
    const double alpha = rec.config.alpha;

    // linearized envelope: z(t) = (||u||_2^2)^{1-alpha} >= z(0) + (alpha-1) C t
    const double z0 = std::pow(l2[0] * l2[0], 1.0 - alpha);
    double num = 0.0, den = 0.0;
    for (size_t i = 1; i < rec.times.size(); ++i) {
        if (!(l2[i] > 0.0)) continue;
        const double z = std::pow(l2[i] * l2[i], 1.0 - alpha);
        num += (z - z0) * rec.times[i];
        den += rec.times[i] * rec.times[i];
    }
    if (den == 0.0) return 0.0;  // zero run
    const double c = num / ((alpha - 1.0) * den);
    if (!(c > 0.0)) return std::numeric_limits<double>::infinity();  // no decay

    double worst = 0.0;
    for (size_t i = 0; i < rec.times.size(); ++i) {
        if (!(l2[i] > 0.0)) continue;
        const double env = std::pow(z0 + (alpha - 1.0) * c * rec.times[i], -1.0 / (alpha - 1.0));
        worst = std::max(worst, (l2[i] * l2[i] - env) / env);
    }
    return std::max(0.0, worst);
}

DecayFit heat_asymptotics(const RunRecord& rec, const RunRecord& heat_rec,
                          double p, double r, double t_lo, double t_hi) {
    const int n_samples = static_cast<int>(rec.times.size());
    if (heat_rec.times.size() != rec.times.size())
        throw std::invalid_argument("heat_asymptotics: unmatched time grids");
    for (int i = 0; i < n_samples; ++i)
        if (rec.times[i] != heat_rec.times[i])
            throw std::invalid_argument("heat_asymptotics: unmatched time grids");
    if (rec.snapshots.empty() || heat_rec.snapshots.empty())
        throw std::invalid_argument("heat_asymptotics: snapshots not stored");

    // admissible parameter window of the asymptotic estimate; the estimate
    // lives at the critical exponent, so n is recovered from alpha = 1 + 2/n
    const double alpha = rec.config.alpha;
    const double n = 2.0 / (alpha - 1.0);
    const double lo = 2.0 * p / n;
    if (!(1.0 < lo) || !(lo < r) || !(r < lo + 1.0))
        throw std::invalid_argument("heat_asymptotics: need 1 < 2p/n < r < 2p/n + 1");
    if (!(n * r / (2.0 * p) > 1.0) || !(n * (r - 1.0) / (2.0 * p) < 1.0) || !(n / (2.0 * p) < 1.0))
        throw std::invalid_argument("heat_asymptotics: parameter window violated");

    std::vector<double> diff(n_samples, 0.0);
    double peak = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        double d = 0.0;
        for (size_t q = 0; q < rec.snapshots[i].size(); ++q)
            d = std::max(d, std::abs(rec.snapshots[i][q] - heat_rec.snapshots[i][q]));
        diff[i] = d;
        peak = std::max(peak, d);
    }
    const double predicted = -(n * r / (2.0 * p) - 1.0);
    if (peak <= 0.0) {
        DecayFit out;
        out.k = kInfinityNorm;
        out.t_lo = t_lo;
        out.t_hi = t_hi;
        out.predicted_slope = predicted;
        out.exact_match = true;
        return out;
    }
    return fit_series(rec.times, diff, kInfinityNorm, t_lo, t_hi, predicted);
}

ContractivityReport contractivity_report(const RunRecord& rec, int dim, double t_split) {
    ContractivityReport rep;
    const double alpha = rec.config.alpha;
    rep.early_bound = -alpha / (alpha - 1.0) + 0.5 * dim;
    rep.late_bound = -alpha / (alpha - 1.0);

    if (rec.times.size() < 3)
        throw std::invalid_argument("contractivity_report: too few samples");

    // singular seeds blow down from the grid cap; bounded data stay O(1)
    double sup_at_split = 0.0;
    for (size_t i = 0; i < rec.times.size(); ++i)
        if (rec.times[i] >= t_split) {
            sup_at_split = rec.sup_series[i];
            break;
        }
    rep.applicable = sup_at_split > 0.0 && rec.sup_series.front() > 20.0 * sup_at_split;
    if (!rep.applicable) return rep;

    const double t_first = rec.times[1];
    rep.early = fit_series(rec.times, rec.sup_series, kInfinityNorm,
                           t_first, t_split, rep.early_bound);
    rep.late = fit_series(rec.times, rec.sup_series, kInfinityNorm,
                          t_split, rec.times.back(), rep.late_bound);
    return rep;
}

BlowupSummary blowup_summary(const RunRecord& rec) {
    if (rec.outcome != Outcome::blowup)
        throw std::invalid_argument("blowup_summary: record did not end in blow-up");
    BlowupSummary s;
    s.t_star = rec.t_star;
    s.sup_at_detect = rec.sup_series.empty() ? 0.0 : rec.sup_series.back();
    return s;
}

double blowup_drift(const RunRecord& coarse, const RunRecord& fine) {
    const BlowupSummary a = blowup_summary(coarse);
    const BlowupSummary b = blowup_summary(fine);
    return std::abs(a.t_star - b.t_star) / b.t_star;
}

}  // namespace nlrd
