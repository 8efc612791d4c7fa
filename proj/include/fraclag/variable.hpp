#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "fraclag/error.hpp"

namespace fraclag {

// Canonical phase/jet variables. The enum order is the canonical variable
// order used for monomial sorting and rendering: T, X, V, A, J, P, PI, P0.
//
//   T        time
//   X_i      order alpha-1 derivative of coordinate i (position-like)
//   V_i      order alpha derivative (velocity-like)
//   A_i      order 2*alpha derivative (acceleration-like)
//   J_{i,k}  order (2+k)*alpha derivative (jet tail, k >= 1)
//   P_i      momentum conjugate to X_i
//   PI_i     momentum conjugate to V_i
//   P0       momentum conjugate to T (energy slot in the extended space)
enum class VarKind : std::uint8_t { T = 0, X, V, A, J, P, PI, P0 };

struct CanonicalVar {
    VarKind kind = VarKind::T;
    int index = 0;  // 1-based coordinate index; 0 for T and P0
    int jet = 0;    // jet order k >= 1 for J, otherwise 0

    friend auto operator<=>(const CanonicalVar&, const CanonicalVar&) = default;
};

inline CanonicalVar var_t() { return {VarKind::T, 0, 0}; }
inline CanonicalVar var_x(int i) { return {VarKind::X, i, 0}; }
inline CanonicalVar var_v(int i) { return {VarKind::V, i, 0}; }
inline CanonicalVar var_a(int i) { return {VarKind::A, i, 0}; }
inline CanonicalVar var_j(int i, int k) { return {VarKind::J, i, k}; }
inline CanonicalVar var_p(int i) { return {VarKind::P, i, 0}; }
inline CanonicalVar var_pi(int i) { return {VarKind::PI, i, 0}; }
inline CanonicalVar var_p0() { return {VarKind::P0, 0, 0}; }

inline std::string to_string(const CanonicalVar& v) {
    switch (v.kind) {
        case VarKind::T: return "t";
        case VarKind::X: return "x" + std::to_string(v.index);
        case VarKind::V: return "v" + std::to_string(v.index);
        case VarKind::A: return "a" + std::to_string(v.index);
        case VarKind::J:
            return "j" + std::to_string(v.index) + "_" + std::to_string(v.jet);
        case VarKind::P: return "p" + std::to_string(v.index);
        case VarKind::PI: return "pi" + std::to_string(v.index);
        case VarKind::P0: return "p0";
    }
    throw Error(ErrorCode::DomainError, "invalid variable kind");
}

inline bool is_momentum(VarKind k) {
    return k == VarKind::P || k == VarKind::PI || k == VarKind::P0;
}

inline bool is_configuration(VarKind k) {
    return k == VarKind::X || k == VarKind::V || k == VarKind::A || k == VarKind::J;
}

}  // namespace fraclag
