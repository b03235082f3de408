#include <cmath>

#include <doctest.h>

#include "douglaskit/module.hpp"
#include "douglaskit/sampling.hpp"
#include "oracles.hpp"

using namespace douglaskit;

namespace {

// one block: p x n matrices over M_n
ModuleShape mod_shape(int p, int n) {
  return ModuleShape(AlgebraShape({n}), {p});
}

ModuleElement from_matrix(const Matrix& m) {
  return ModuleElement(
      mod_shape(static_cast<int>(m.rows()), static_cast<int>(m.cols())), {m});
}

AdjointableOperator op_from_matrix(const Matrix& m, const ModuleShape& dom,
                                   const ModuleShape& codom) {
  return AdjointableOperator(dom, codom, {m});
}

}  // namespace

TEST_SUITE_BEGIN("module");

TEST_CASE("inner product: direct values and the module axioms") {
  Matrix xm(1, 2), ym(1, 2);
  xm << 1, 0;
  ym << 0, 1;
  const ModuleElement x = from_matrix(xm), y = from_matrix(ym);
  const AlgebraElement ip = inner_product(x, y);
  CHECK(ip.blocks[0](0, 1) == Complex(1, 0));
  CHECK(ip.blocks[0](0, 0) == Complex(0, 0));
  CHECK(ip.blocks[0](1, 0) == Complex(0, 0));
  CHECK(ip.blocks[0](1, 1) == Complex(0, 0));

  const AlgebraElement gram = inner_product(x, x);
  CHECK(gram.blocks[0](0, 0) == Complex(1, 0));
  CHECK(is_positive(gram).positive);

  // <x, y a> = <x, y> a, <y, x> = <x, y>*, conjugate linearity
  Sampler s(31);
  const ModuleShape shape(AlgebraShape({2, 3}), {2, 1});
  for (int k = 0; k < 30; ++k) {
    const ModuleElement u = s.module_element(shape);
    const ModuleElement v = s.module_element(shape);
    const AlgebraElement a = s.element(shape.algebra);
    CHECK(distance(inner_product(u, v * a), inner_product(u, v) * a) <=
          1e-12 * std::max(1.0, norm(inner_product(u, v)) * norm(a)));
    CHECK(distance(inner_product(v, u), adjoint(inner_product(u, v))) <=
          1e-13);
    const Complex alpha = s.scalar();
    CHECK(distance(inner_product(alpha * u, v),
                   std::conj(alpha) * inner_product(u, v)) <= 1e-12);
  }

  // <x,x> = 0 iff x = 0
  CHECK(norm(inner_product(ModuleElement::zero(shape),
                           ModuleElement::zero(shape))) == 0.0);

  // <x,x> is always positive and vanishes only at zero
  for (int k = 0; k < 40; ++k) {
    const ModuleElement u = s.module_element(shape);
    const AlgebraElement g = inner_product(u, u);
    CHECK(is_positive(g).positive);
    if (element_norm(u) > 0.0) CHECK(norm(g) > 0.0);
  }
}

TEST_CASE("element_norm equals the top singular value") {
  Matrix m(1, 2);
  m << 3, 0;
  CHECK(element_norm(from_matrix(m)) == doctest::Approx(3.0));
  CHECK(element_norm(ModuleElement::zero(mod_shape(2, 2))) == 0.0);

  Matrix two(2, 2);
  two << 1, 0, 1, 0;
  CHECK(oracles::power_sigma_max(two) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(element_norm(from_matrix(two)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

  // and matches sqrt(norm(<x,x>))
  Sampler s(4);
  for (int k = 0; k < 20; ++k) {
    const ModuleElement x = s.module_element(mod_shape(3, 2));
    CHECK(element_norm(x) ==
          doctest::Approx(std::sqrt(norm(inner_product(x, x))))
              .epsilon(1e-11));
  }
}

TEST_CASE("apply: identity, direct products, algebra linearity") {
  const ModuleShape shape = mod_shape(2, 1);
  Sampler s(6);
  const ModuleElement x = s.module_element(shape);
  CHECK(element_norm(apply(AdjointableOperator::identity(shape), x) - x) ==
        0.0);

  Matrix t(2, 2);
  t << 2, 0, 0, 0;
  Matrix xm(2, 1);
  xm << 1, 1;
  const ModuleElement out =
      apply(op_from_matrix(t, shape, shape), from_matrix(xm));
  CHECK(out.blocks[0](0, 0) == Complex(2, 0));
  CHECK(out.blocks[0](1, 0) == Complex(0, 0));

  const ModuleShape big(AlgebraShape({2, 2}), {3, 2});
  for (int k = 0; k < 30; ++k) {
    const AdjointableOperator op = s.op(big, big);
    const ModuleElement u = s.module_element(big);
    const AlgebraElement a = s.element(big.algebra);
    CHECK(element_norm(apply(op, u * a) - apply(op, u) * a) <=
          1e-12 * std::max(1.0, operator_norm(op) * element_norm(u) * norm(a)));
  }
}

TEST_CASE("adjoint_op: conjugate transpose and the defining identity") {
  Matrix up = Matrix::Zero(2, 2), down = Matrix::Zero(2, 2);
  up(0, 1) = 1;
  down(1, 0) = 1;
  const ModuleShape shape = mod_shape(2, 2);
  CHECK(operator_distance(adjoint_op(op_from_matrix(up, shape, shape)),
                          op_from_matrix(down, shape, shape)) == 0.0);

  Matrix d(2, 2);
  d << 1, 0, 0, -2;
  CHECK(operator_distance(adjoint_op(op_from_matrix(d, shape, shape)),
                          op_from_matrix(d, shape, shape)) == 0.0);

  Sampler s(12);
  const ModuleShape dom(AlgebraShape({2, 1}), {2, 3});
  const ModuleShape codom(AlgebraShape({2, 1}), {3, 2});
  const AdjointableOperator t = s.op(dom, codom);
  const AdjointableOperator ts = adjoint_op(t);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const ModuleElement x = s.module_element(dom);
    const ModuleElement y = s.module_element(codom);
    worst = std::max(worst, distance(inner_product(apply(t, x), y),
                                     inner_product(x, apply(ts, y))));
  }
  CHECK(worst <= 1e-12 * operator_norm(t));

  // involution and composition reversal
  CHECK(operator_distance(adjoint_op(ts), t) == 0.0);
  const AdjointableOperator u = s.op(codom, dom);
  CHECK(operator_distance(adjoint_op(compose(u, t)),
                          compose(adjoint_op(t), adjoint_op(u))) <= 1e-13);
}

TEST_CASE("range and null submodules") {
  const ModuleShape shape = mod_shape(2, 2);
  Matrix m(2, 2);
  m << 1, 0, 1, 0;
  const Submodule range = range_submodule(op_from_matrix(m, shape, shape));
  REQUIRE(range.dims() == std::vector<int>{1});
  // basis spans (1,1)/sqrt(2): compare projectors
  Matrix proj = range.bases[0] * range.bases[0].adjoint();
  Matrix expect(2, 2);
  expect << 0.5, 0.5, 0.5, 0.5;
  CHECK((proj - expect).norm() < 1e-12);

  CHECK(range_submodule(AdjointableOperator::identity(shape)).dims() ==
        std::vector<int>{2});
  CHECK(range_submodule(AdjointableOperator::zero(shape, shape)).dims() ==
        std::vector<int>{0});

  Matrix d(2, 2);
  d << 2, 0, 0, 0;
  const Submodule null = null_submodule(op_from_matrix(d, shape, shape));
  REQUIRE(null.dims() == std::vector<int>{1});
  CHECK(std::abs(null.bases[0](1, 0)) == doctest::Approx(1.0).epsilon(1e-12));

  Matrix inj(3, 2);
  inj << 1, 0, 0, 1, 1, 1;
  CHECK(null_submodule(op_from_matrix(inj, mod_shape(2, 1), mod_shape(3, 1)))
            .dims() == std::vector<int>{0});

  // rank-nullity per block on random operators, rank from a QR oracle
  Sampler s(23);
  for (int k = 0; k < 30; ++k) {
    const ModuleShape dom(AlgebraShape({1, 2}), {s.uniform_int(0, 4),
                                                 s.uniform_int(1, 4)});
    const ModuleShape codom(AlgebraShape({1, 2}), {s.uniform_int(1, 4),
                                                   s.uniform_int(1, 4)});
    const AdjointableOperator t = s.op(dom, codom);
    const std::vector<int> r = range_submodule(t).dims();
    const std::vector<int> n = null_submodule(t).dims();
    for (std::size_t i = 0; i < t.mats.size(); ++i) {
      CHECK(r[i] + n[i] == dom.row_dims[i]);
      CHECK(r[i] == oracles::qr_rank(t.mats[i], 1e-10));
    }
  }
}

TEST_CASE("orthogonal complement and complementation certificates") {
  const ModuleShape shape = mod_shape(2, 1);
  Matrix e1 = Matrix::Zero(2, 1);
  e1(0, 0) = 1;
  const Submodule f(shape, {e1});
  const Submodule perp = orthogonal_complement(f);
  REQUIRE(perp.dims() == std::vector<int>{1});
  CHECK(std::abs(perp.bases[0](1, 0)) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(orthogonal_complement(Submodule::full(shape)).dims() ==
        std::vector<int>{0});

  Sampler s(8);
  const ModuleShape big(AlgebraShape({1, 1}), {5, 3});
  for (int k = 0; k < 25; ++k) {
    const Submodule g = range_submodule(
        s.op(ModuleShape(big.algebra, {s.uniform_int(0, 5),
                                       s.uniform_int(0, 3)}),
             big));
    // double complement reproduces the projector
    const Submodule gg = orthogonal_complement(orthogonal_complement(g));
    CHECK(operator_distance(projector(g), projector(gg)) <= 1e-10);

    const ComplementCertificate cert = check_orthogonally_complemented(g);
    CHECK(cert.complemented);
    CHECK(cert.projector_residual <= 1e-10);

    // P_F + P_Fperp = I
    const AdjointableOperator sum =
        projector(g) + projector(orthogonal_complement(g));
    CHECK(operator_distance(sum, AdjointableOperator::identity(big)) <= 1e-10);
  }

  CHECK(check_orthogonally_complemented(Submodule::zero(shape)).complemented);

  // a 3-dimensional subspace of C^5: dimensions add to 5
  const ModuleShape amb(AlgebraShape({1}), {5});
  Sampler s2(77);
  const Submodule w =
      range_submodule(s2.op(ModuleShape(amb.algebra, {3}), amb));
  const ComplementCertificate cert = check_orthogonally_complemented(w);
  CHECK(cert.complemented);
  CHECK(cert.dims == std::vector<int>{3});
  CHECK(cert.codims == std::vector<int>{2});
}

TEST_CASE("submodule containment with least-squares oracle") {
  const ModuleShape shape = mod_shape(2, 1);
  Matrix e1 = Matrix::Zero(2, 1), e2 = Matrix::Zero(2, 1);
  e1(0, 0) = 1;
  e2(1, 0) = 1;
  const Submodule s1(shape, {e1});
  const Submodule s2(shape, {e2});
  CHECK(submodule_contains(Submodule::full(shape), s1).contains);

  const ContainsResult bad = submodule_contains(s1, s2);
  CHECK(!bad.contains);
  REQUIRE(bad.witness.has_value());
  CHECK(bad.witness->residual == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(bad.witness->column(1)) == doctest::Approx(1.0));

  // colspace(A) inside colspace([A | b]): least-squares residual oracle
  Sampler s(91);
  for (int k = 0; k < 25; ++k) {
    const Matrix a = s.matrix(4, 2);
    const Matrix b = s.matrix(4, 1);
    Matrix ab(4, 3);
    ab << a, b;
    const ModuleShape amb = mod_shape(4, 1);
    const Submodule small = range_submodule(
        op_from_matrix(a, mod_shape(2, 1), amb));
    const Submodule big = range_submodule(
        op_from_matrix(ab, mod_shape(3, 1), amb));
    const ContainsResult res = submodule_contains(big, small);
    CHECK(res.contains);
    for (Eigen::Index j = 0; j < small.bases[0].cols(); ++j)
      CHECK(oracles::lstsq_residual(ab, small.bases[0].col(j)) <= 1e-10);
    // generically b escapes colspace(A)
    if (oracles::lstsq_residual(a, b.col(0)) > 1e-6)
      CHECK(!submodule_contains(small, big).contains);
  }

  CHECK_THROWS_AS(
      submodule_contains(s1, Submodule::full(mod_shape(3, 1))), ShapeError);
}

TEST_CASE("Cauchy-Schwarz and the range/null decomposition") {
  Sampler s(13);
  const ModuleShape shape(AlgebraShape({2, 2}), {3, 2});
  for (int k = 0; k < 40; ++k) {
    const ModuleElement x = s.module_element(shape);
    const ModuleElement y = s.module_element(shape);
    CHECK(norm(inner_product(x, y)) <=
          element_norm(x) * element_norm(y) + 1e-10);
  }

  // E = closure(range T*) (+) null T, blockwise
  for (int k = 0; k < 25; ++k) {
    const ModuleShape dom(AlgebraShape({1, 2}), {s.uniform_int(1, 4),
                                                 s.uniform_int(1, 4)});
    const ModuleShape codom(AlgebraShape({1, 2}), {s.uniform_int(1, 4),
                                                   s.uniform_int(1, 4)});
    const AdjointableOperator t = s.op(dom, codom);
    const AdjointableOperator sum =
        projector(range_submodule(adjoint_op(t))) + projector(null_submodule(t));
    CHECK(operator_distance(sum, AdjointableOperator::identity(dom)) <= 1e-10);
  }
}

TEST_CASE("zero-dimensional module blocks are usable") {
  const ModuleShape shape(AlgebraShape({2, 2}), {0, 2});
  const ModuleElement z = ModuleElement::zero(shape);
  CHECK(element_norm(z) == 0.0);

  Sampler s(1);
  const ModuleElement x = s.module_element(shape);
  CHECK(x.blocks[0].rows() == 0);
  const AlgebraElement ip = inner_product(x, x);
  CHECK(ip.blocks[0].rows() == 2);  // ip of an empty block is the 0 matrix
  CHECK(ip.blocks[0].norm() == 0.0);

  const AdjointableOperator id = AdjointableOperator::identity(shape);
  CHECK(operator_norm(id) == 1.0);
  CHECK(element_norm(apply(id, x) - x) == 0.0);
  CHECK(range_submodule(id).dims() == std::vector<int>{0, 2});
}

TEST_SUITE_END();
