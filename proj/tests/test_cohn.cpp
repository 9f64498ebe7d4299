#include <gtest/gtest.h>

#include <random>

#include "kmarkov/cohn.hpp"
#include "oracles.hpp"

using namespace kmarkov;

namespace {

Mat2 c01(long k) { return {-k, 1, -3 * k * k - 3 * k - 1, 3 * k + 3}; }
Mat2 c12(long k) {
  return {k + 2, 2 * k * k + 6 * k + 5, 3 * k * k + 9 * k + 5, 6 * k * k * k + 24 * k * k + 31 * k + 13};
}
Mat2 c11(long k) { return {1, k + 2, 3 * k + 2, 3 * k * k + 8 * k + 5}; }

oracle::M2 small(const Mat2& m) { return {m.m11.get_si(), m.m12.get_si(), m.m21.get_si(), m.m22.get_si()}; }

}  // namespace

TEST(Cohn, SMatrix) {
  EXPECT_EQ(s_matrix(0), (Mat2{0, 0, 0, 0}));
  EXPECT_EQ(s_matrix(1), (Mat2{1, 0, 6, 1}));
  EXPECT_EQ(s_matrix(2), (Mat2{2, 0, 18, 2}));
  for (long k = 0; k < 8; ++k) EXPECT_EQ(trace(s_matrix(k)), 2 * k);
}

TEST(Cohn, MatrixArithmetic) {
  Mat2 a{2, 5, 5, 13};
  EXPECT_EQ(mat_mul(Mat2::identity(), a), a);
  EXPECT_EQ(mat_inv(a), (Mat2{13, -5, -5, 2}));
  EXPECT_EQ(mat_mul(mat_inv(a), a), Mat2::identity());
  EXPECT_THROW(mat_inv(Mat2{2, 0, 0, 2}), DomainError);
  EXPECT_EQ(mat_mul(a, a), a.trace() * a - Mat2::identity());
}

TEST(Cohn, ProductMatchesMachineIntegers) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    Mat2 a = random_unimodular(rng, 12), b = random_unimodular(rng, 12);
    oracle::M2 p = oracle::mul(small(a), small(b));
    Mat2 q = a * b;
    EXPECT_EQ(q.m11, p.a);
    EXPECT_EQ(q.m12, p.b);
    EXPECT_EQ(q.m21, p.c);
    EXPECT_EQ(q.m22, p.d);
    EXPECT_EQ(a.det(), 1);
  }
}

TEST(Cohn, IsCohnMatrix) {
  for (long k = 0; k < 10; ++k) EXPECT_TRUE(is_cohn_matrix(k, c11(k)));
  EXPECT_FALSE(is_cohn_matrix(0, Mat2::identity()));
  EXPECT_TRUE(is_cohn_matrix(0, Mat2{2, 5, 5, 13}));
}

TEST(Cohn, RootTriples) {
  CohnTriple z = root_triple(0, 0);
  EXPECT_EQ(z.P(), (Mat2{0, 1, -1, 3}));
  EXPECT_EQ(z.Q(), (Mat2{1, 1, 1, 2}));
  EXPECT_EQ(z.R(), (Mat2{2, 1, 1, 1}));
  for (long k = 0; k <= 6; ++k)
    for (long l = -8; l <= 8; ++l) {
      CohnTriple t = root_triple(k, l);
      EXPECT_EQ(t.Q(), t.P() * t.R() - s_matrix(k));
      EXPECT_FALSE(t.violation().has_value());
      EXPECT_EQ(t.P().m11, l);
    }
  for (long k = 0; k <= 6; ++k) EXPECT_EQ(root_triple(k, -k).P(), c01(k));
}

TEST(Cohn, CheckedRejectsInvalid) {
  CohnTriple t = root_triple(1, 0);
  EXPECT_THROW(CohnTriple::checked(1, t.P(), t.P(), t.R()), InvariantError);
  EXPECT_TRUE(CohnTriple::unchecked(1, t.P(), t.P(), t.R()).violation().has_value());
}

TEST(Cohn, Children) {
  CohnTriple l = child_left(root_triple(0, 0));
  EXPECT_EQ(l.Q(), (Mat2{1, 2, 2, 5}));
  EXPECT_EQ(l.Q().trace(), 6);
  std::mt19937_64 rng(5);
  for (long k = 0; k <= 5; ++k) {
    auto all = enumerate_cohn(k, -k, 6, CohnTreeKind::wide);
    for (int i = 0; i < 40; ++i) {
      const CohnTriple& t = all[rng() % all.size()];
      EXPECT_TRUE(child_left(t).markov().same_entries(vieta_left(t.markov())));
      EXPECT_TRUE(child_right(t).markov().same_entries(vieta_right(t.markov())));
    }
  }
}

TEST(Cohn, LowerTreeRootDisplays) {
  for (long k = 0; k <= 10; ++k) {
    CohnTriple r = cohn_root(k, -k, CohnTreeKind::lower);
    EXPECT_EQ(r.P(), c01(k)) << k;
    EXPECT_EQ(r.Q(), c12(k)) << k;
    EXPECT_EQ(r.R(), c11(k)) << k;
  }
}

TEST(Cohn, Index) {
  for (long k = 0; k < 6; ++k) {
    EXPECT_EQ(index(c11(k)), Rational(1, k + 2));
    EXPECT_EQ(index(c01(k)), Rational(-k));
  }
  EXPECT_EQ(index(Mat2{2, 5, 5, 13}), Rational(2, 5));
  EXPECT_THROW(index(Mat2::identity()), DomainError);
}

TEST(Cohn, ParentsInvertChildren) {
  for (long k = 0; k <= 4; ++k)
    for (long l : {-k, 0L, 3L}) {
      enumerate_cohn(k, l, 5, CohnTreeKind::cohn, [&](const CohnTriple& t) {
        EXPECT_TRUE(parent_from_left(child_left(t)).same_matrices(t));
        EXPECT_TRUE(parent_from_right(child_right(t)).same_matrices(t));
        auto [p, side] = cohn_parent(child_right(t));
        EXPECT_EQ(side, Side::right);
        EXPECT_TRUE(p.same_matrices(t));
      });
    }
  EXPECT_THROW(parent_from_left(root_triple(0, 0)), DomainError);
}

TEST(Cohn, DescentRecoversRootAndAddress) {
  for (long k = 0; k <= 4; ++k)
    for (long l : {-k, 0L, 2L}) {
      enumerate_cohn(k, l, 6, CohnTreeKind::lower, [&](const CohnTriple& t) {
        CohnTriple bare = CohnTriple::checked(t.k(), t.P(), t.Q(), t.R());
        CohnDescent d = descend_to_root(bare);
        EXPECT_EQ(d.l, l);
        EXPECT_EQ(d.address.str(), "LL" + t.address()->str());
      });
    }
  // classical descent: [[5,13],[8,...]] style entries for k = 0 land on l = 0
  CohnTriple deep = cohn_at(0, 0, TreeAddress::parse("LRLRR"), CohnTreeKind::wide);
  EXPECT_EQ(descend_to_root(deep).l, 0);
}

TEST(Cohn, EnumeratedMatricesSatisfyConditions) {
  for (long k = 0; k <= 6; ++k) {
    const Mat2 S = s_matrix(k);
    enumerate_cohn(k, -k, 7, CohnTreeKind::lower, [&](const CohnTriple& t) {
      for (const Mat2* m : {&t.P(), &t.Q(), &t.R()}) {
        EXPECT_EQ(m->det(), 1);
        EXPECT_TRUE(is_cohn_matrix(k, *m));
        EXPECT_EQ(trace(S * mat_inv(*m)), -k * k);
      }
      EXPECT_LT(index(t.P()), index(t.Q()));
      EXPECT_LT(index(t.Q()), index(t.R()));
      EXPECT_GT(t.Q().m11, 0);
    });
  }
}

TEST(Cohn, MatchesMarkovTreeAtEveryAddress) {
  for (long k = 0; k <= 5; ++k) {
    const std::pair<CohnTreeKind, MarkovTreeKind> pairs[] = {{CohnTreeKind::wide, MarkovTreeKind::wide},
                                                            {CohnTreeKind::cohn, MarkovTreeKind::markov},
                                                            {CohnTreeKind::lower, MarkovTreeKind::lower}};
    for (auto [ct, mt] : pairs) {
      auto cohn = enumerate_cohn(k, -k, 8, ct);
      auto markov = enumerate(k, 8, mt);
      ASSERT_EQ(cohn.size(), markov.size());
      for (std::size_t i = 0; i < cohn.size(); ++i) {
        EXPECT_TRUE(cohn[i].markov().same_entries(markov[i]));
        EXPECT_EQ(*cohn[i].address(), *markov[i].address);
      }
    }
  }
}

TEST(Cohn, GctStar) {
  EXPECT_TRUE(gct_star_check(0, 0, 4));
  EXPECT_TRUE(gct_star_check(1, -1, 4));
  EXPECT_TRUE(gct_star_check(3, 2, 3));
  for (long k = 0; k <= 4; ++k)
    for (long l = -k - 2; l <= 3; ++l) EXPECT_TRUE(gct_star_check(k, l, 4)) << k << " " << l;
}

TEST(Cohn, TraceIdentity) {
  const Mat2 I = Mat2::identity();
  EXPECT_TRUE(trace_identity_check(I, I, I));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i)
    EXPECT_TRUE(trace_identity_check(random_unimodular(rng), random_unimodular(rng), random_unimodular(rng)));
  auto all = enumerate_cohn(2, -2, 3, CohnTreeKind::lower);
  for (std::size_t i = 0; i + 2 < all.size(); ++i)
    EXPECT_TRUE(trace_identity_check(all[i].P(), all[i + 1].Q(), all[i + 2].R()));
}

// The pairing x = -tr(AB), y = -tr(BC), z = -tr(CA) is not an identity; a
// single explicit triple shows it.
TEST(Cohn, TraceIdentityPairingMatters) {
  const Mat2 A{1, 1, 0, 1}, B{1, 0, 1, 1}, C{2, 1, 1, 1};
  auto lhs = [](const Mat2& A, const Mat2& B, const Mat2& C, const Integer& x, const Integer& y, const Integer& z) -> Integer {
    Integer a = -trace(A), b = -trace(B), c = -trace(C), d = -trace(A * B * C);
    Integer v = x * x + y * y + z * z + (a * d + b * c) * x + (b * d + c * a) * y + (c * d + a * b) * z + a * a + b * b +
                c * c + d * d + a * b * c * d - 4;
    return v - x * y * z;
  };
  EXPECT_EQ(lhs(A, B, C, -trace(B * C), -trace(C * A), -trace(A * B)), 0);
  EXPECT_TRUE(trace_identity_check(A, B, C));
  EXPECT_NE(lhs(A, B, C, -trace(A * B), -trace(B * C), -trace(C * A)), 0);
}

TEST(Cohn, TraceLemmas) {
  std::mt19937_64 rng(2);
  std::vector<std::pair<Mat2, Mat2>> pairs;
  for (int i = 0; i < 200; ++i) pairs.emplace_back(random_unimodular(rng), random_unimodular(rng));
  pairs.emplace_back(Mat2::identity(), Mat2{2, 5, 5, 13});
  for (long k = 0; k <= 4; ++k) {
    std::vector<Mat2> cohn;
    enumerate_cohn(k, -k, 4, CohnTreeKind::lower, [&](const CohnTriple& t) { cohn.push_back(t.Q()); });
    CheckReport r = verify_trace_lemmas(pairs, k, cohn);
    EXPECT_TRUE(r.ok()) << (r.failures.empty() ? "" : r.failures.front());
  }
  const long k = 1;
  const Mat2 M = c11(k), E{0, 0, 3 + 3 * k, 0};
  EXPECT_EQ(M * E * M, (M.trace() + k) * M + E);
}
