#pragma once

namespace spindyn {

// Complete elliptic integral of the first kind, parameter m = k^2 in [0, 1),
// by the arithmetic-geometric mean.
double elliptic_k(double m);

// Jacobi elliptic sine sn(u | m), m in [0, 1], AGM descending recursion.
double jacobi_sn(double u, double m);

}  // namespace spindyn
