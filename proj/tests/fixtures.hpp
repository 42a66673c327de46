#pragma once

#include "dh/config.hpp"

namespace fx {

inline dh::MaterialParams mat(dh::Shape s) { return dh::preset(s).material; }
inline dh::FieldProfile field(dh::Shape s) { return dh::preset(s).field; }

inline dh::MaterialParams graphene_mat() { return {1, 1, 0, 1}; }
inline dh::FieldProfile graphene_field() { return dh::FieldProfile::with_drift(dh::Shape::Constant, 1, 0); }

// k_y values at which the preset parameters admit several levels.
inline double typical_k(dh::Shape s) {
  switch (s) {
    case dh::Shape::Constant: return 0.7;
    case dh::Shape::Exponential: return 6.0;
    case dh::Shape::Hyperbolic: return 1.0;
  }
  return 0;
}

constexpr dh::Shape all_shapes[] = {dh::Shape::Constant, dh::Shape::Exponential, dh::Shape::Hyperbolic};

}  // namespace fx
