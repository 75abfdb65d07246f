#include "diaster/rd/encoder.hpp"

#include <stdexcept>

namespace diaster::rd {

Vector SaEncoder::encode(int s, int a) const {
  Vector out(dim());
  encode_into(s, a, out);
  return out;
}

void SaEncoder::encode_into(int s, int a, Vector& out) const {
  if (s < 0 || s >= n_states_) throw std::invalid_argument("SaEncoder: state out of range");
  if (!state_only_ && (a < 0 || a >= n_actions_)) throw std::invalid_argument("SaEncoder: action out of range");
  out.setZero();
  out(s) = 1.0;
  if (!state_only_) out(n_states_ + a) = 1.0;
}

}  // namespace diaster::rd
