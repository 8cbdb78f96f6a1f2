#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qspir {

/// Label (a,b) of the qubit Weyl operator W(a,b) = X^a Z^b.
/// The four labels enumerate {I, X, Z, XZ}.
struct WeylLabel {
  std::uint8_t a = 0;  // X exponent
  std::uint8_t b = 0;  // Z exponent

  friend constexpr bool operator==(WeylLabel, WeylLabel) = default;
};

/// Componentwise addition in Z2 x Z2.
constexpr WeylLabel operator+(WeylLabel x, WeylLabel y) {
  return {static_cast<std::uint8_t>((x.a + y.a) & 1),
          static_cast<std::uint8_t>((x.b + y.b) & 1)};
}

/// Canonical packing of a label into {0,1,2,3}: index = 2a + b.
constexpr int label_index(WeylLabel l) { return l.a * 2 + l.b; }

constexpr WeylLabel label_from_index(int i) {
  return {static_cast<std::uint8_t>((i >> 1) & 1),
          static_cast<std::uint8_t>(i & 1)};
}

/// Exponent s with W(x) W(y) = (-1)^s W(y) W(x).
constexpr std::uint8_t commutation_sign(WeylLabel x, WeylLabel y) {
  return static_cast<std::uint8_t>((x.b * y.a + x.a * y.b) & 1);
}

/// A Weyl operator with a tracked sign: (-1)^sign W(label).
/// The eight values form a group under compose(); signs stay exact
/// because XZ = -ZX already holds with real matrix entries.
struct SignedWeyl {
  std::uint8_t sign = 0;  // exponent s in (-1)^s
  WeylLabel label;

  friend constexpr bool operator==(SignedWeyl, SignedWeyl) = default;
};

constexpr SignedWeyl weyl_identity() { return {0, {0, 0}}; }

/// Product: W(a1,b1) W(a2,b2) = (-1)^{b1 a2} W(a1+a2, b1+b2), signs folded in.
constexpr SignedWeyl compose(SignedWeyl x, SignedWeyl y) {
  return {static_cast<std::uint8_t>((x.sign + y.sign + x.label.b * y.label.a) & 1),
          x.label + y.label};
}

/// Conjugate transpose: W(a,b)^dag = (-1)^{ab} W(a,b).
constexpr SignedWeyl adjoint(SignedWeyl x) {
  return {static_cast<std::uint8_t>((x.sign + x.label.a * x.label.b) & 1), x.label};
}

/// Transpose: W(a,b)^T = (-1)^{ab} W(a,b) (real entries, so same as adjoint).
constexpr SignedWeyl transpose(SignedWeyl x) { return adjoint(x); }

/// Moves an operator across the maximally entangled pair:
/// (I (x) W_x)|Phi> = (W_y (x) I)|Phi> with y = ((x.sign + ab), x.label).
/// Involution on SignedWeyl.
constexpr SignedWeyl bell_transfer(SignedWeyl x) {
  return {static_cast<std::uint8_t>((x.sign + x.label.a * x.label.b) & 1), x.label};
}

using Mat2 = std::array<std::array<std::complex<double>, 2>, 2>;

/// Explicit 2x2 realization (-1)^sign X^a Z^b. Entries are in {0, +-1};
/// provided for cross-checking only, the protocol paths stay symbolic.
inline Mat2 matrix(SignedWeyl x) {
  const double s = x.sign ? -1.0 : 1.0;
  Mat2 m{};
  for (int j = 0; j < 2; ++j) {
    // X^a Z^b |j> = (-1)^{jb} |j+a>
    const int i = (j + x.label.a) & 1;
    const double ph = ((j * x.label.b) & 1) ? -1.0 : 1.0;
    m[i][j] = s * ph;
  }
  return m;
}

inline std::string to_string(WeylLabel l) {
  return "W(" + std::to_string(int(l.a)) + "," + std::to_string(int(l.b)) + ")";
}

inline std::string to_string(SignedWeyl x) {
  return (x.sign ? "-" : "+") + to_string(x.label);
}

/// Ordered list of Weyl labels, one per file block. Packs into a 2*len-bit
/// word when it fits in 64 bits, with a spill vector for longer vectors.
class LabelVector {
 public:
  LabelVector() = default;

  explicit LabelVector(std::size_t len) : len_(len) {
    if (len_ == 0) throw std::invalid_argument("LabelVector: length must be >= 1");
    if (len_ > kPackedMax) spill_.assign(len_, 0);
  }

  explicit LabelVector(const std::vector<WeylLabel>& labels)
      : LabelVector(labels.size()) {
    for (std::size_t i = 0; i < labels.size(); ++i) set(i, labels[i]);
  }

  std::size_t size() const { return len_; }

  WeylLabel at(std::size_t i) const {
    check(i);
    const int idx = len_ <= kPackedMax
                        ? int((bits_ >> (2 * i)) & 3)
                        : int(spill_[i]);
    return label_from_index(idx);
  }

  void set(std::size_t i, WeylLabel l) {
    check(i);
    const std::uint64_t idx = std::uint64_t(label_index(l));
    if (len_ <= kPackedMax) {
      bits_ = (bits_ & ~(std::uint64_t(3) << (2 * i))) | (idx << (2 * i));
    } else {
      spill_[i] = static_cast<std::uint8_t>(idx);
    }
  }

  /// Componentwise Z2 x Z2 addition per block.
  friend LabelVector operator+(const LabelVector& x, const LabelVector& y) {
    if (x.len_ != y.len_)
      throw std::invalid_argument("LabelVector: length mismatch");
    LabelVector r(x.len_);
    if (x.len_ <= kPackedMax) {
      r.bits_ = x.bits_ ^ y.bits_;
    } else {
      for (std::size_t i = 0; i < x.len_; ++i)
        r.spill_[i] = x.spill_[i] ^ y.spill_[i];
    }
    return r;
  }

  friend bool operator==(const LabelVector& x, const LabelVector& y) {
    return x.len_ == y.len_ && x.bits_ == y.bits_ && x.spill_ == y.spill_;
  }

  /// 2*len-bit integer key (only for vectors that fit the packed word).
  std::uint64_t packed() const {
    if (len_ > kPackedMax)
      throw std::invalid_argument("LabelVector: too long for packed key");
    return bits_;
  }

  static LabelVector from_packed(std::size_t len, std::uint64_t bits) {
    LabelVector r(len);
    if (len > kPackedMax)
      throw std::invalid_argument("LabelVector: too long for packed key");
    r.bits_ = bits & (len == kPackedMax ? ~std::uint64_t(0)
                                        : ((std::uint64_t(1) << (2 * len)) - 1));
    return r;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < len_; ++i) {
      if (i) s += ",";
      s += to_string(at(i));
    }
    return s + "]";
  }

 private:
  static constexpr std::size_t kPackedMax = 32;

  void check(std::size_t i) const {
    if (i >= len_) throw std::out_of_range("LabelVector: index out of range");
  }

  std::size_t len_ = 0;
  std::uint64_t bits_ = 0;
  std::vector<std::uint8_t> spill_;
};

}  // namespace qspir
