#include "eerelay/hyp2f1.hpp"

#include <cmath>
#include <stdexcept>

namespace eerelay {

double hyp2f1_series(double a, double b, double c, double z) {
    if (!(std::abs(z) < 1.0)) throw std::invalid_argument("hyp2f1_series: |z| must be < 1");
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < 200000000; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if (std::abs(term) <= 1e-15 * std::abs(sum)) return sum;
    }
    throw std::runtime_error("hyp2f1_series: no convergence");
}

namespace {

// Pfaff: 2F1(1, b; b+1; -x) = (1+x)^-1 * 2F1(1, 1; b+1; x/(1+x)).
double pfaff_unit_a(double b, double x) {
    const double w = x / (1.0 + x);
    return hyp2f1_series(1.0, 1.0, b + 1.0, w) / (1.0 + x);
}

}  // namespace

double hyp2f1_unit_a(double b, double x) {
    if (x < 0 || b <= 0) throw std::invalid_argument("hyp2f1_unit_a: need x >= 0, b > 0");
    if (x == 0.0) return 1.0;
    if (x <= 50.0 || std::abs(1.0 - b) < 1e-6) return pfaff_unit_a(b, x);
    // Large argument: z -> 1/z connection keeps the Pfaff series argument
    // small instead of letting it crawl toward 1.
    //   2F1(1,b;b+1;-x) = b*pi/sin(pi*b) * x^-b - b/(1-b) * x^-1
    //                     * 2F1(1, 1-b; 2-b; -1/x)
    const double lead = b * M_PI / std::sin(M_PI * b) * std::pow(x, -b);
    const double inv = 1.0 / x;
    const double tail =
        b / (1.0 - b) * inv * hyp2f1_series(1.0, 1.0, 2.0 - b, inv / (1.0 + inv)) / (1.0 + inv);
    return lead - tail;
}

}  // namespace eerelay
