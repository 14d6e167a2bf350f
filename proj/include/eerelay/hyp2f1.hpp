// Gauss hypergeometric evaluation for the annulus path-loss integrals.
#pragma once

namespace eerelay {

/// 2F1(1, b; b+1; -x) for x >= 0, b > 0. Evaluated through the Pfaff
/// transformation to argument x/(1+x) in [0,1) followed by a convergent
/// power series (term tolerance 1e-15), avoiding the alternating-series
/// cancellation of the defining series at negative argument.
double hyp2f1_unit_a(double b, double x);

/// General-ish 2F1(a, b; c; z) for |z| < 1 by direct series; used by the
/// Pfaff-transformed path above and exposed for tests.
double hyp2f1_series(double a, double b, double c, double z);

}  // namespace eerelay
