#include <gtest/gtest.h>

#include "kmarkov/farey.hpp"
#include "oracles.hpp"

using namespace kmarkov;

TEST(Farey, FractionBasics) {
  EXPECT_EQ(Fraction(2, 4), Fraction(1, 2));
  EXPECT_EQ(Fraction::parse("6/9").str(), "2/3");
  EXPECT_EQ(Fraction::parse("3").str(), "3/1");
  EXPECT_TRUE(Fraction(1, 0).is_infinite());
  EXPECT_THROW(Fraction(0, 0), DomainError);
  EXPECT_THROW(Fraction::parse("1/x"), DomainError);
  EXPECT_LT(Fraction(1, 3), Fraction(1, 2));
  EXPECT_LT(Fraction(5, 1), Fraction(1, 0));
}

TEST(Farey, Determinant) {
  EXPECT_EQ(farey_det(Fraction(0, 1), Fraction(1, 0)), -1);
  EXPECT_EQ(farey_det(Fraction(1, 2), Fraction(1, 1)), -1);
  EXPECT_EQ(farey_det(Fraction(2, 5), Fraction(3, 7)), -1);
}

TEST(Farey, Children) {
  auto [l, r] = farey_children(FareyTriple::root());
  EXPECT_EQ(l.left, Fraction(0, 1));
  EXPECT_EQ(l.mid, Fraction(1, 2));
  EXPECT_EQ(l.right, Fraction(1, 1));
  EXPECT_EQ(r.left, Fraction(1, 1));
  EXPECT_EQ(r.mid, Fraction(2, 1));
  EXPECT_EQ(r.right, Fraction(1, 0));
  auto [ll, lr] = farey_children(l);
  EXPECT_EQ(ll.mid, Fraction(1, 3));
  EXPECT_EQ(ll.right, Fraction(1, 2));
  EXPECT_EQ(lr.mid, Fraction(2, 3));
}

TEST(Farey, AddressExamples) {
  EXPECT_TRUE(fraction_to_address(Fraction(1, 1)).is_root());
  EXPECT_EQ(fraction_to_address(Fraction(1, 2)).str(), "L");
  EXPECT_EQ(fraction_to_address(Fraction(3, 5)).str(), "LRL");
  EXPECT_THROW(fraction_to_address(Fraction(0, 1)), DomainError);
  EXPECT_THROW(fraction_to_address(Fraction(1, 0)), DomainError);
}

TEST(Farey, TreeMatchesBfsAndContinuedFractions) {
  const auto bfs = oracle::farey_bfs(14);
  ASSERT_EQ(bfs.size(), (1u << 15) - 1);
  for (const auto& [addr, frac] : bfs) {
    Fraction t(frac.first, frac.second);
    ASSERT_EQ(t.num(), frac.first) << addr;
    ASSERT_EQ(t.den(), frac.second) << addr;
    const TreeAddress a = TreeAddress::parse(addr);
    ASSERT_EQ(fraction_to_address(t).str(), addr);
    ASSERT_EQ(oracle::sb_address_cf(frac.first, frac.second), addr);
    ASSERT_EQ(address_to_fraction(a), t);
  }
}

TEST(Farey, VerticesAreValid) {
  std::vector<FareyTriple> level{FareyTriple::root()};
  for (int d = 0; d <= 12; ++d) {
    std::vector<FareyTriple> next;
    for (const FareyTriple& t : level) {
      ASSERT_TRUE(t.valid());
      EXPECT_EQ(farey_det(t.left, t.mid), -1);
      EXPECT_EQ(farey_det(t.mid, t.right), -1);
      EXPECT_LT(t.left, t.mid);
      EXPECT_LT(t.mid, t.right);
      auto [l, r] = farey_children(t);
      next.push_back(l);
      next.push_back(r);
    }
    level = std::move(next);
  }
}

TEST(Farey, LabelCohn) {
  for (long k = 0; k <= 6; ++k) {
    Mat2 c = label_cohn(k, -k, Fraction(1, 2));
    EXPECT_EQ(c, (Mat2{k + 2, 2 * k * k + 6 * k + 5, 3 * k * k + 9 * k + 5, 6 * k * k * k + 24 * k * k + 31 * k + 13}));
  }
  EXPECT_EQ(label_cohn(0, 0, Fraction(1, 1)).m12, 2);
}

TEST(Farey, IndexIncreasesWithFraction) {
  for (long k = 0; k <= 4; ++k)
    for (long l : {-k, 0L, 1L}) {
      std::vector<Fraction> fr;
      for (const auto& [addr, f] : oracle::farey_bfs(6)) fr.emplace_back(f.first, f.second);
      std::sort(fr.begin(), fr.end());
      for (std::size_t i = 0; i + 1 < fr.size(); ++i)
        EXPECT_LT(index(label_cohn(k, l, fr[i])), index(label_cohn(k, l, fr[i + 1])))
            << fr[i].str() << " " << fr[i + 1].str();
    }
}

TEST(Farey, MarkovLabels) {
  for (long k = 0; k <= 6; ++k) {
    EXPECT_EQ(markov_label(k, Fraction(0, 1)), 1);
    EXPECT_EQ(markov_label(k, Fraction(1, 1)), k + 2);
  }
  EXPECT_EQ(markov_label(0, Fraction(1, 2)), 5);
  EXPECT_EQ(markov_label(1, Fraction(1, 2)), 13);
  EXPECT_EQ(markov_label(0, Fraction(1, 3)), 13);
  EXPECT_EQ(markov_label(0, Fraction(2, 3)), 29);
  EXPECT_THROW(markov_label(0, Fraction(3, 2)), DomainError);
}

TEST(Farey, CharacteristicNumbers) {
  EXPECT_EQ(characteristic_number(0, Fraction(1, 2)), 2);
  EXPECT_EQ(label_cohn(0, 0, Fraction(1, 2)).m11, 2);
  EXPECT_EQ(characteristic_number(1, Fraction(1, 2)), 3);
  EXPECT_THROW(characteristic_number(0, Fraction(1, 1)), DomainError);
  EXPECT_FALSE(label(0, Fraction(0, 1)).u_t.has_value());
}

TEST(Farey, CharacteristicNumberProperties) {
  for (long k = 0; k <= 6; ++k)
    for (const auto& [addr, f] : oracle::farey_bfs(8)) {
      Fraction t(f.first, f.second);
      if (!(t.num() > 0 && t.num() < t.den())) continue;
      Label lab = label(k, t);
      ASSERT_TRUE(lab.u_t.has_value());
      const Natural& m = lab.m_t;
      const Natural& u = *lab.u_t;
      EXPECT_EQ((u * u + k * u + 1) % m, 0) << t.str();
      EXPECT_LT(2 * (u + k), m);
      EXPECT_GT(u, 0);
      EXPECT_LT(u * (k + 2), m);
      MarkovTriple tri = detail::lmt_triple_for(k, t);
      EXPECT_EQ((tri.a * u - tri.c) % m, 0);
    }
}

TEST(Farey, LabelsAreDistinct) {
  for (long k = 0; k <= 3; ++k) {
    std::set<Natural> seen;
    for (const auto& [addr, f] : oracle::farey_bfs(9)) {
      Fraction t(f.first, f.second);
      if (t.num() > 0 && t.num() < t.den()) {
        EXPECT_TRUE(seen.insert(markov_label(k, t)).second) << t.str();
      }
    }
  }
}
