#pragma once

namespace rinv {

struct JacobiSCD {
    double sn, cn, dn;
};

// Jacobi elliptic functions of argument u and parameter m = k^2, 0 <= m <= 1,
// by the AGM / descending Landen scheme.
JacobiSCD jacobi(double u, double m);
inline double jacobi_cn(double u, double m) { return jacobi(u, m).cn; }

// Complete elliptic integral of the first kind K(m), by AGM.
double ellip_k(double m);

} // namespace rinv
