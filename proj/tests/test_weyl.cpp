#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <vector>

#include "qspir/weyl.hpp"

using namespace qspir;

namespace {

std::vector<SignedWeyl> all_elements() {
  std::vector<SignedWeyl> out;
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < 4; ++i)
      out.push_back({std::uint8_t(s), label_from_index(i)});
  return out;
}

Mat2 matmul(const Mat2& x, const Mat2& y) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r[i][j] += x[i][k] * y[k][j];
  return r;
}

bool mat_equal(const Mat2& x, const Mat2& y) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (x[i][j] != y[i][j]) return false;  // entries are exactly 0 or +-1
  return true;
}

Mat2 conj_transpose(const Mat2& x) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = std::conj(x[j][i]);
  return r;
}

}  // namespace

TEST_CASE("compose: pinned examples") {
  const SignedWeyl id = weyl_identity();
  const SignedWeyl x{0, {1, 0}};
  const SignedWeyl z{0, {0, 1}};
  const SignedWeyl xz{0, {1, 1}};

  CHECK(compose(id, xz) == SignedWeyl{0, {1, 1}});
  CHECK(compose(z, x) == SignedWeyl{1, {1, 1}});   // ZX = -XZ = -W(1,1)
  CHECK(compose(x, z) == SignedWeyl{0, {1, 1}});   // XZ = W(1,1)
}

TEST_CASE("compose matches 2x2 matrix multiplication on all 64 pairs") {
  for (const auto& x : all_elements())
    for (const auto& y : all_elements())
      CHECK(mat_equal(matrix(compose(x, y)), matmul(matrix(x), matrix(y))));
}

TEST_CASE("group law: associativity over all 512 triples") {
  const auto g = all_elements();
  for (const auto& x : g)
    for (const auto& y : g)
      for (const auto& z : g)
        CHECK(compose(compose(x, y), z) == compose(x, compose(y, z)));
}

TEST_CASE("adjoint: pinned examples and matrix oracle") {
  CHECK(adjoint(weyl_identity()) == weyl_identity());
  CHECK(adjoint(SignedWeyl{0, {1, 1}}) == SignedWeyl{1, {1, 1}});
  CHECK(adjoint(SignedWeyl{0, {1, 0}}) == SignedWeyl{0, {1, 0}});
  for (const auto& x : all_elements())
    CHECK(mat_equal(matrix(adjoint(x)), conj_transpose(matrix(x))));
}

TEST_CASE("involutions and inverses") {
  for (const auto& x : all_elements()) {
    CHECK(adjoint(adjoint(x)) == x);
    CHECK(compose(x, adjoint(x)) == weyl_identity());
    CHECK(bell_transfer(bell_transfer(x)) == x);
  }
}

TEST_CASE("commutation_sign: pinned examples and both-orders check") {
  CHECK(commutation_sign({0, 0}, {1, 1}) == 0);
  CHECK(commutation_sign({1, 0}, {0, 1}) == 1);
  CHECK(commutation_sign({1, 0}, {1, 0}) == 0);
  for (const auto& x : all_elements())
    for (const auto& y : all_elements()) {
      const SignedWeyl xy = compose(x, y);
      const SignedWeyl yx = compose(y, x);
      CHECK(xy.label == yx.label);
      CHECK(((xy.sign ^ yx.sign) & 1) == commutation_sign(x.label, y.label));
    }
}

TEST_CASE("matrix: pinned entries") {
  const Mat2 mi = matrix(weyl_identity());
  CHECK(mi[0][0] == 1.0);
  CHECK(mi[0][1] == 0.0);
  CHECK(mi[1][1] == 1.0);
  const Mat2 mz = matrix({0, {0, 1}});
  CHECK(mz[0][0] == 1.0);
  CHECK(mz[1][1] == -1.0);
  const Mat2 mxz = matrix({0, {1, 1}});
  CHECK(mxz[0][0] == 0.0);
  CHECK(mxz[0][1] == -1.0);
  CHECK(mxz[1][0] == 1.0);
  CHECK(mxz[1][1] == 0.0);
}

TEST_CASE("bell_transfer: pinned sign flips") {
  CHECK(bell_transfer(weyl_identity()) == weyl_identity());
  CHECK(bell_transfer(SignedWeyl{0, {1, 1}}) == SignedWeyl{1, {1, 1}});
  CHECK(bell_transfer(SignedWeyl{0, {1, 0}}) == SignedWeyl{0, {1, 0}});
}

TEST_CASE("label vector packing and addition") {
  LabelVector a(3), b(3);
  a.set(0, {1, 0});
  a.set(2, {1, 1});
  b.set(0, {0, 1});
  b.set(1, {1, 1});
  const LabelVector c = a + b;
  CHECK(c.at(0) == WeylLabel{1, 1});
  CHECK(c.at(1) == WeylLabel{1, 1});
  CHECK(c.at(2) == WeylLabel{1, 1});
  CHECK(LabelVector::from_packed(3, c.packed()).packed() == c.packed());

  // Spill path beyond the packed width behaves identically.
  LabelVector big(40);
  big.set(39, {1, 0});
  CHECK((big + big).at(39) == WeylLabel{0, 0});
  CHECK(big.at(39) == WeylLabel{1, 0});
}

TEST_CASE("textual rendering") {
  CHECK(to_string(SignedWeyl{0, {1, 0}}) == "+W(1,0)");
  CHECK(to_string(SignedWeyl{1, {0, 1}}) == "-W(0,1)");
}
