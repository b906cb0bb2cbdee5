#pragma once
#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "deckopt/errors.hpp"

namespace deckopt {

inline double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / xs.size();
}

/// Unbiased sample variance (n - 1 denominator).
inline double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) throw InsufficientData("sample_variance: need >= 2 values");
    double m = mean_of(xs);
    double sum = 0.0;
    for (double x : xs) sum += (x - m) * (x - m);
    return sum / (xs.size() - 1);
}

/// Median; the mean of the two middle values for even lengths.
inline double median_of(std::vector<double> xs) {
    if (xs.empty()) throw InsufficientData("median_of: empty sample");
    std::sort(xs.begin(), xs.end());
    std::size_t mid = xs.size() / 2;
    return xs.size() % 2 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
    bool significant = false; // at the 0.01 level
    bool degenerate = false;  // both samples had zero variance
};

/// Welch's unequal-variance two-sample t-test, two-tailed. Zero-variance
/// pairs fall back to conventions: equal means give p = 1, unequal p = 0.
inline WelchResult welch_test(const std::vector<double>& a,
                              const std::vector<double>& b,
                              double significance_level = 0.01) {
    if (a.size() < 2 || b.size() < 2)
        throw InsufficientData("welch_test: need >= 2 values per sample");
    if (a.size() != b.size())
        throw InvalidArgument("welch_test: samples must pair up by instance");
    WelchResult res;
    double ma = mean_of(a), mb = mean_of(b);
    double va = sample_variance(a), vb = sample_variance(b);
    double qa = va / a.size(), qb = vb / b.size();
    double se2 = qa + qb;
    if (se2 <= 0.0) {
        res.degenerate = true;
        res.t = 0.0;
        res.df = static_cast<double>(a.size() + b.size() - 2);
        res.p = (ma == mb) ? 1.0 : 0.0;
        res.significant = res.p < significance_level;
        return res;
    }
    res.t = (ma - mb) / std::sqrt(se2);
    res.df = se2 * se2 /
             (qa * qa / (a.size() - 1) + qb * qb / (b.size() - 1));
    if (res.t == 0.0) {
        res.p = 1.0;
    } else {
        boost::math::students_t dist(res.df);
        res.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(res.t)));
    }
    res.significant = res.p < significance_level;
    return res;
}

} // namespace deckopt
