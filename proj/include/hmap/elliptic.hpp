#pragma once

namespace hmap {

struct EllipticParams {
    double n = 0.0; // dimensionless parameter; n>1 and n<0 handled by transformations
};

struct JacobiValues {
    double sn, cn, dn;
};

/// Jacobi elliptic functions sn, cn, dn of argument v and parameter n,
/// evaluated by AGM / descending Landen. Parameters n>1 use the reciprocal
/// identity sn(v|n) = n^{-1/2} sn(n^{1/2} v | 1/n); n<0 uses the standard
/// negative-parameter transformation.
JacobiValues jacobi_elliptic(double v, double n);

/// Incomplete elliptic integral of the first kind F(phi|n), principal branch
/// |phi| <= pi/2, via the Carlson symmetric form RF. Inverse of sn:
/// sn(F(phi|n)|n) = sin(phi). Throws std::domain_error when n sin^2 phi >= 1.
double incomplete_elliptic_f(double phi, double n);

/// Complete elliptic integral K(n) = F(pi/2|n), n < 1.
double complete_elliptic_k(double n);

namespace detail {
/// Carlson symmetric elliptic integral RF(x,y,z), x,y,z >= 0, at most one zero.
double carlson_rf(double x, double y, double z);
} // namespace detail

} // namespace hmap
