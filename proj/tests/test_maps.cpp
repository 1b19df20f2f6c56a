#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace meanforge;
using namespace testing_support;

namespace {

std::vector<UcpMap> sample_maps(int n, Rng& rng) {
  std::vector<UcpMap> maps;
  for (MapKind kind : all_map_kinds()) maps.push_back(gen_map(kind, n, rng));
  return maps;
}

}  // namespace

TEST_CASE("identity map") {
  const UcpMap id = identity_map(3);
  CHECK((id.apply(diag({1, 2, 3})) - diag({1, 2, 3})).norm() == 0.0);
  const UnitalCheck u = verify_unital(id);
  CHECK(u.defect == 0.0);
  CHECK(u.ok);
}

TEST_CASE("depolarizing map is the normalized trace") {
  const UcpMap phi = depolarizing(2);
  CHECK((phi.apply(diag({1, 3})) - 2.0 * Matrix::Identity(2, 2)).norm() < 1e-14);
  CHECK(verify_unital(phi).defect <= 1e-14);
  const MatrixTuple t({HpdMatrix::checked(diag({1, 3})), HpdMatrix::scalar(2, 2.0)},
                      WeightVector::uniform(2));
  const MatrixTuple mapped = map_tuple(phi, t);
  for (const auto& a : mapped.matrices()) {
    CHECK((a.matrix() - 2.0 * Matrix::Identity(2, 2)).norm() < 1e-14);
  }
}

TEST_CASE("pinching removes the off-diagonal blocks") {
  const UcpMap phi = pinching(2, {1, 1});
  CHECK((phi.apply(real2(2, 1, 1, 2)) - diag({2, 2})).norm() == 0.0);
  CHECK_THROWS_AS(pinching(3, {1, 1}), Error);
}

TEST_CASE("compression extracts a corner") {
  Matrix v = Matrix::Zero(2, 1);
  v(0, 0) = 1.0;
  const UcpMap phi = compression(v);
  CHECK(phi.in_dim() == 2);
  CHECK(phi.out_dim() == 1);
  const Matrix out = phi.apply(real2(2, 1, 1, 2));
  CHECK(out.rows() == 1);
  CHECK(out(0, 0).real() == doctest::Approx(2.0));

  const MatrixTuple t({HpdMatrix::checked(diag({5, 1})), HpdMatrix::checked(diag({7, 2}))},
                      WeightVector::uniform(2));
  const MatrixTuple mapped = map_tuple(phi, t);
  CHECK(mapped[0].matrix()(0, 0).real() == doctest::Approx(5.0));
  CHECK(mapped[1].matrix()(0, 0).real() == doctest::Approx(7.0));
  CHECK_THROWS_AS(compression(2.0 * v), Error);
}

TEST_CASE("unitary conjugation requires a unitary") {
  Rng rng(1);
  const Matrix u = gen_haar_unitary(3, rng);
  const UcpMap phi = unitary_conjugation(u);
  const Matrix a = diag({1, 2, 3});
  CHECK((phi.apply(a) - u.adjoint() * a * u).norm() < 1e-13);
  CHECK_THROWS_AS(unitary_conjugation(2.0 * u), Error);
}

TEST_CASE("random maps are unital by construction") {
  const UcpMap phi = random_map(3, 3, 4, 7);
  CHECK(verify_unital(phi).defect <= 1e-12);
  CHECK(verify_unital(phi).ok);
  const UcpMap again = random_map(3, 3, 4, 7);
  for (std::size_t k = 0; k < phi.kraus().size(); ++k) CHECK(phi.kraus()[k] == again.kraus()[k]);
  CHECK(verify_unital(random_map(4, 2, 3, 1)).ok);
}

TEST_CASE("scaled Kraus operators break unitality") {
  for (int n : {1, 2, 3, 5}) {
    const UcpMap phi = identity_map(n);
    std::vector<Matrix> scaled;
    for (const auto& v : phi.kraus()) scaled.push_back(0.9 * v);
    const UnitalCheck u = verify_unital(UcpMap(scaled));
    CHECK(u.defect == doctest::Approx(0.19 * std::sqrt(static_cast<double>(n))));
    CHECK_FALSE(u.ok);
  }
}

TEST_CASE("convex combinations stay unital") {
  Rng rng(2);
  const UcpMap phi = convex_combination(
      {identity_map(3), depolarizing(3), unitary_conjugation(gen_haar_unitary(3, rng))},
      WeightVector({0.2, 0.3, 0.5}));
  CHECK(verify_unital(phi).defect < 1e-13);
  const Matrix a = diag({1, 2, 6});
  const Matrix expected = 0.2 * a + 0.3 * 3.0 * Matrix::Identity(3, 3) +
                          0.5 * (phi.kraus().back().adjoint() * a * phi.kraus().back()) / 0.5;
  CHECK((phi.apply(a) - expected).norm() < 1e-12);
}

TEST_CASE("maps are positive, monotone, and preserve spectral bounds") {
  Rng rng(3);
  for (int n : {2, 3, 5}) {
    const auto maps = sample_maps(n, rng);
    for (const UcpMap& phi : maps) {
      CHECK(verify_unital(phi).ok);
      for (int trial = 0; trial < 200; ++trial) {
        const double m = 0.1;
        const double M = 10.0;
        const HpdMatrix a = gen_hpd(n, m, M, trial % 2 == 0, rng);
        const Matrix fa = phi.apply(a.matrix());
        const RealVector lam = eigvalsh(fa);
        REQUIRE(lam(0) > 0.0);
        REQUIRE(lam(0) >= m - 1e-10 * M);
        REQUIRE(lam(lam.size() - 1) <= M + 1e-10 * M);
        if (trial % 10 == 0) {
          // A <= B with B = A + PSD.
          const Matrix g = random_complex(n, n, rng);
          const Matrix b = a.matrix() + g * g.adjoint();
          REQUIRE(loewner_slack(fa, phi.apply(b), 1e-9).holds);
          // Choi's inequality.
          REQUIRE(loewner_slack(matrix_inverse(fa), phi.apply(matrix_inverse(a.matrix())), 1e-9).holds);
        }
      }
    }
  }
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(UcpMap(std::vector<Matrix>{}), Error);
  CHECK_THROWS_AS(UcpMap({Matrix::Identity(2, 2), Matrix::Identity(3, 3)}), Error);
  try {
    identity_map(2).apply(Matrix::Identity(3, 3));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("map kinds round-trip through their names") {
  for (MapKind kind : all_map_kinds()) CHECK(parse_map_kind(to_string(kind)) == kind);
  CHECK_THROWS_AS(parse_map_kind("nope"), Error);
}
