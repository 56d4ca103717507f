// Copyright 2026 The qiit-elab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "common.hpp"
#include "gen.hpp"
#include "qiit/qiit.hpp"

namespace {

using namespace qiit;
using namespace qiit::otl;

const Level kI = Level::var();

// Hand-built Nat translations. Inside a prefix bound to g of the full
// algebra: N = snd (fst (fst g)), zero = snd (fst g), suc = snd g.
struct NatParts {
  Tm n, zero, suc;
};

NatParts parts(const Tm& g) { return {proj2(proj1(proj1(g))), proj2(proj1(g)), proj2(g)}; }

Tm nat_algebra() {
  Tm c1 = sigma("g", top(), [](Tm) { return set(kI); });
  Tm c2 = sigma("g", c1, [](Tm g) { return proj2(g); });
  return sigma("g", c2, [](Tm g) { return arrow(proj2(proj1(g)), proj2(proj1(g))); });
}

Tm nat_displayed_chain(const Tm& g) {
  NatParts p = parts(g);
  Tm c1 = sigma("d", top(), [&](Tm) { return arrow(p.n, set(kI)); });
  Tm c2 = sigma("d", c1, [&](Tm d) { return app(proj2(d), p.zero); });
  return sigma("d", c2, [&](Tm d) {
    Tm nd = proj2(proj1(d));
    return pi("n", p.n, [&](Tm n) { return arrow(app(nd, n), app(nd, app(p.suc, n))); });
  });
}

Tm nat_section_chain(const Tm& g, const Tm& gd) {
  NatParts p = parts(g);
  NatParts d = parts(gd);
  Tm c1 = sigma("s", top(), [&](Tm) { return pi("x", p.n, [&](Tm x) { return app(d.n, x); }); });
  Tm c2 = sigma("s", c1, [&](Tm s) { return eq(app(proj2(s), p.zero), d.zero); });
  return sigma("s", c2, [&](Tm s) {
    Tm ns = proj2(proj1(s));
    return pi("n", p.n, [&](Tm n) { return eq(app(ns, app(p.suc, n)), app(d.suc, {n, app(ns, n)})); });
  });
}

Tm nat_expected(What w) {
  switch (w) {
    case What::kAlgebra: return nat_algebra();
    case What::kDisplayed: return lam("g", nat_algebra(), [](Tm g) { return nat_displayed_chain(g); });
    case What::kSection:
      return lam("g", nat_algebra(), [](Tm g) {
        return lam("gD", nat_displayed_chain(g), [&](Tm gd) { return nat_section_chain(g, gd); });
      });
    case What::kMorphism:
      return lam("g0", nat_algebra(), [](Tm g0) {
        return lam("g1", nat_algebra(), [&](Tm g1) {
          NatParts a = parts(g0), b = parts(g1);
          Tm c1 = sigma("h", top(), [&](Tm) { return arrow(a.n, b.n); });
          Tm c2 = sigma("h", c1, [&](Tm h) { return eq(app(proj2(h), a.zero), b.zero); });
          return sigma("h", c2, [&](Tm h) {
            Tm nm = proj2(proj1(h));
            return pi("n", a.n, [&](Tm n) { return eq(app(nm, app(a.suc, n)), app(b.suc, app(nm, n))); });
          });
        });
      });
    case What::kInduction:
      return lam("g", nat_algebra(), [](Tm g) {
        return pi("gD", nat_displayed_chain(g), [&](Tm gd) { return nat_section_chain(g, gd); });
      });
  }
  return top();
}

TEST(Translate, NatMatchesHandBuiltTerms) {
  Signature sig = testutil::corpus("nat");
  for (What w : kAllWhats) {
    Translation t = translate(sig, w);
    EXPECT_EQ(t.term, nat_expected(w)) << to_string(w) << "\n" << to_sexpr(t.term);
    EXPECT_TRUE(otl_validate(nat_expected(w), {})) << to_string(w);
  }
}

TEST(Translate, NatTypes) {
  Signature sig = testutil::corpus("nat");
  EXPECT_EQ(validate(translate(sig, What::kAlgebra).term, {}).type, set(suc(kI)));
  EXPECT_EQ(validate(translate(sig, What::kDisplayed).term, {}).type, arrow(nat_algebra(), set(suc(kI))));
  Tm mor = validate(translate(sig, What::kMorphism).term, {}).type;
  EXPECT_EQ(mor, arrow(nat_algebra(), arrow(nat_algebra(), set(kI))));
}

TEST(Translate, TreeDisplayedAndMorphism) {
  Signature sig = testutil::corpus("tree");
  const Level zero = Level::lit(0);
  // (Tree : Set i) × (node : (A : Set 0) → (A → Tree) → Tree)
  Tm c1 = sigma("g", top(), [](Tm) { return set(kI); });
  Tm alg = sigma("g", c1, [&](Tm g) {
    Tm tree = proj2(g);
    return pi("A", set(zero), [&](Tm a) { return arrow(arrow(a, tree), tree); });
  });
  EXPECT_EQ(translate(sig, What::kAlgebra).term, alg);

  Tm disp = lam("g", alg, [&](Tm g) {
    Tm tree = proj2(proj1(g)), node = proj2(g);
    Tm d1 = sigma("d", top(), [&](Tm) { return arrow(tree, set(kI)); });
    return sigma("d", d1, [&](Tm d) {
      Tm td = proj2(d);
      return pi("A", set(zero), [&](Tm a) {
        return pi("f", arrow(a, tree), [&](Tm f) {
          return arrow(pi("x", a, [&](Tm x) { return app(td, app(f, x)); }), app(td, app(node, {a, f})));
        });
      });
    });
  });
  EXPECT_EQ(translate(sig, What::kDisplayed).term, disp);

  Tm mor = lam("g0", alg, [&](Tm g0) {
    return lam("g1", alg, [&](Tm g1) {
      Tm t0 = proj2(proj1(g0)), t1 = proj2(proj1(g1));
      Tm h1 = sigma("h", top(), [&](Tm) { return arrow(t0, t1); });
      return sigma("h", h1, [&](Tm h) {
        Tm tm = proj2(h);
        return pi("A", set(zero), [&](Tm a) {
          return pi("f", arrow(a, t0), [&](Tm f) {
            Tm rhs = app(proj2(g1), {a, lam("x", a, [&](Tm x) { return app(tm, app(f, x)); })});
            return eq(app(tm, app(proj2(g0), {a, f})), rhs);
          });
        });
      });
    });
  });
  EXPECT_EQ(translate(sig, What::kMorphism).term, mor);
}

TEST(Translate, EquationComponentsCollapse) {
  Signature sig = testutil::corpus("category");
  for (What w : {What::kSection, What::kMorphism}) {
    Tm t = translate(sig, w).term;
    while (t->kind == Kind::kLam) t = t->kids[1];
    auto comps = *sigma_components(t);
    ASSERT_EQ(comps.size(), sig.size());
    for (std::size_t k = 4; k < comps.size(); ++k) {
      Tm c = comps[k];
      while (c->kind == Kind::kPi) c = c->kids[1];
      EXPECT_EQ(c->kind, Kind::kTop) << to_string(w) << " " << sig.entries[k].name;
    }
  }
}

TEST(Translate, EmptySignature) {
  Signature sig = testutil::corpus("empty");
  EXPECT_EQ(translate(sig, What::kAlgebra).term, top());
  for (What w : kAllWhats) EXPECT_TRUE(otl_validate(translate(sig, w).term, {}));
}

TEST(Translate, TwoRoutesAgreeOnCorpus) {
  for (const auto& name : testutil::all_names()) {
    Signature sig = testutil::corpus(name);
    for (What w : kAllWhats) {
      EXPECT_EQ(translate(sig, w).term, translate_via_model(sig, w).term) << name << " " << to_string(w);
    }
  }
}

TEST(Translate, TwoRoutesAgreeOnRandomSignatures) {
  testgen::Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    testgen::Gen g(rng);
    Signature sig = g.signature(1 + rng.below(12));
    for (What w : kAllWhats) {
      ASSERT_EQ(translate(sig, w).term, translate_via_model(sig, w).term)
          << to_string(w) << "\n" << surface::print(sig);
    }
  }
}

TEST(Translate, RandomAlgebrasAreChains) {
  testgen::Rng rng(12);
  for (int k = 0; k < 200; ++k) {
    testgen::Gen g(rng);
    std::size_t n = 1 + static_cast<std::size_t>(rng.below(12));
    Signature sig = g.signature(n);
    Tm alg = translate(sig, What::kAlgebra).term;
    // n Σ layers over ⊤: n + 1 components counting the unit.
    std::size_t layers = 0;
    Tm t = alg;
    while (t->kind == Kind::kSigma) {
      ++layers;
      t = t->kids[0];
    }
    EXPECT_EQ(t->kind, Kind::kTop);
    EXPECT_EQ(layers, n);
    ASSERT_TRUE(sigma_components(alg));
    // Sorts become Set i, everything else lives below.
    auto comps = *sigma_components(alg);
    for (std::size_t m = 0; m < n; ++m) {
      bool sort = sig.entries[m].type.is<core::ty::U>();
      EXPECT_EQ(comps[m] == set(kI), sort) << m;
    }
  }
}

TEST(Translate, EntryNamesAndExternals) {
  Signature sig = elaborate("external E; external c : E; sig S { A : U; f : E => El A; }");
  Translation t = translate(sig, What::kAlgebra);
  EXPECT_EQ(t.entry_names, (std::vector<std::string>{"A", "f"}));
  ASSERT_EQ(t.externals.size(), 2u);
  EXPECT_EQ(t.externals[1].type, ext("E"));
  EXPECT_TRUE(otl_validate(t.term, t.externals));
  EXPECT_FALSE(otl_validate(t.term, {}));
}

TEST(Translate, ParseWhat) {
  for (What w : kAllWhats) EXPECT_EQ(parse_what(to_string(w)), w);
  EXPECT_THROW(parse_what("coalgebra"), Error);
}

}  // namespace
