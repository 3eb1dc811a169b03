#pragma once

#include <functional>

#include "wavelife/lattice.hpp"

namespace wavelife {

// Duhamel operators on the characteristic lattice.
//
//   L(v)(x,t)   = 1/2 ∫_0^t ds ∫_{x-t+s}^{x+t-s} v(y,s) dy
//   L'(v)(x,t)  = 1/2 ∫_0^t {v(x+t-s,s) + v(x-t+s,s)} ds
//   Lbar'(v)    = 1/2 ∫_0^t {v(x+t-s,s) - v(x-t+s,s)} ds
//
// The backward triangle of a lattice point is tiled by lattice diamonds of
// one parity class plus half-diamonds on t = 0. Each diamond contributes its
// area times the mean of its two side vertices; each base half-diamond its
// area times the mean of its three vertices. L' and Lbar' use the trapezoid
// rule along the two lattice characteristics. All three rules are exact for
// v affine in (y, s).

/// L(v) at lattice point (n, i) by direct summation over the triangle.
double op_L(const LatticeArray& v, int n, int i);
/// L'(v) at lattice point (n, i) by direct summation along the characteristics.
double op_Lprime(const LatticeArray& v, int n, int i);
/// Lbar'(v) at lattice point (n, i).
double op_Lbar(const LatticeArray& v, int n, int i);

/// Point-valued overloads; (x, t) must be a lattice point. Throws
/// std::out_of_range when t exceeds the sampled horizon or x the lattice.
double op_L(const LatticeArray& v, double x, double t);
double op_Lprime(const LatticeArray& v, double x, double t);
double op_Lbar(const LatticeArray& v, double x, double t);

/// L(v) at every lattice point through the diamond recursion
/// L(n+1) = L(n)|_{i+1} + L(n)|_{i-1} - L(n-1) + diamond(n, i).
LatticeArray apply_L(const LatticeArray& v);

struct CharacteristicPair {
    LatticeArray lprime;
    LatticeArray lbar;
};

/// L'(v) and Lbar'(v) at every lattice point.
CharacteristicPair apply_Lprime(const LatticeArray& v);

/// Samples v(y, s) on the lattice.
LatticeArray sample(const Lattice& lat, const std::function<double(double, double)>& v);

}  // namespace wavelife
