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

Tm set_i() { return set(kI); }

/// (N : Set i) × (zero : N) × (suc : N → N), built by hand.
Tm nat_algebra() {
  Tm c1 = sigma("g", top(), [](Tm) { return set_i(); });
  Tm c2 = sigma("g", c1, [](Tm g) { return proj2(g); });
  return sigma("g", c2, [](Tm g) {
    Tm n = proj2(proj1(g));
    return arrow(n, n);
  });
}

/// Rebuilds a chain from its components, outermost last.
Tm chain(const std::vector<Tm>& comps) {
  Tm t = top();
  for (const auto& c : comps) t = binder(Kind::kSigma, "g", t, c);
  return t;
}

TEST(Level, Arithmetic) {
  EXPECT_EQ(suc(kI), (Level{true, 1, 0}));
  EXPECT_EQ(lmax(suc(kI), Level::lit(2)), (Level{true, 1, 2}));
  EXPECT_EQ(lmax(kI, Level::lit(0)), kI);
  EXPECT_EQ(suc(Level::lit(3)), Level::lit(4));
  EXPECT_EQ(at(Level{true, 1, 3}, 0), Level::lit(3));
  EXPECT_EQ(at(Level{true, 1, 3}, 5), Level::lit(6));
  EXPECT_EQ(level_text(Level{true, 1, 0}), "suc i");
  EXPECT_EQ(level_text(Level{true, 0, 2}), "max i 2");
}

TEST(Terms, AlphaEqualityIgnoresLabels) {
  Tm a = pi("x", set_i(), [](Tm x) { return x; });
  Tm b = pi("y", set_i(), [](Tm y) { return y; });
  EXPECT_EQ(a, b);
  EXPECT_FALSE(identical(a, b));
  EXPECT_NE(a, arrow(set_i(), set_i()));
}

TEST(Terms, BetaAndInstantiate) {
  Tm id = lam("x", set_i(), [](Tm x) { return x; });
  EXPECT_EQ(beta(app(id, top())), top());
  Tm k = lam("x", set_i(), [](Tm) { return lam("y", set_i(), [](Tm y) { return y; }); });
  EXPECT_EQ(beta(app(app(k, top()), bool_ty())), bool_ty());
}

TEST(Terms, ChainComponents) {
  auto comps = sigma_components(nat_algebra());
  ASSERT_TRUE(comps);
  EXPECT_EQ(comps->size(), 3u);
  EXPECT_FALSE(sigma_components(set_i()));
  EXPECT_EQ(chain(*comps), nat_algebra());
}

TEST(Validator, AcceptsHandBuiltNatAlgebra) {
  Validation v = validate(nat_algebra(), {});
  ASSERT_TRUE(v.ok) << v.message;
  EXPECT_EQ(v.type, set(suc(kI)));
}

TEST(Validator, RejectsSwappedComponents) {
  auto comps = *sigma_components(nat_algebra());
  for (std::size_t a = 0; a < comps.size(); ++a) {
    for (std::size_t b = a + 1; b < comps.size(); ++b) {
      auto swapped = comps;
      std::swap(swapped[a], swapped[b]);
      EXPECT_FALSE(otl_validate(chain(swapped), {})) << a << " " << b;
    }
  }
}

TEST(Validator, RejectsSwappedComponentsOfEmittedChains) {
  // Swapping a component with one it depends on breaks typing.
  for (const char* name : {"nat", "category", "receq", "twosort"}) {
    Signature sig = testutil::corpus(name);
    auto comps = *sigma_components(translate(sig, What::kAlgebra).term);
    for (std::size_t k = 1; k < comps.size(); ++k) {
      if (comps[k]->loose == 0) continue;
      auto swapped = comps;
      std::swap(swapped[k - 1], swapped[k]);
      EXPECT_FALSE(otl_validate(chain(swapped), tr::externals(sig))) << name << " " << k;
    }
  }
}

TEST(Validator, RejectsIllTyped) {
  std::vector<std::pair<std::string, Tm>> bad{
      {"open", bvar(0)},
      {"free", fresh("x").term()},
      {"proj of set", proj1(set_i())},
      {"app of non-function", app(top(), tt())},
      {"pi over element", pi("x", tt(), [](Tm) { return top(); })},
      {"eq across types", lam("A", set_i(), [](Tm a) {
         return lam("x", a, [](Tm x) { return eq(x, tt()); });
       })},
      {"wrong argument", app(lam("x", bool_ty(), [](Tm x) { return x; }), tt())},
      {"fin literal out of range", fin_lit(3, 3)},
      {"unknown external", ext("E")},
  };
  for (const auto& [what, t] : bad) {
    EXPECT_FALSE(otl_validate(t, {})) << what;
  }
}

TEST(Validator, TransportAndRefl) {
  // λ A P x y (e : x ≡ y) (px : P x). transport P e px : P y
  Tm t = lam("A", set_i(), [](Tm a) {
    return lam("P", arrow(a, set_i()), [&](Tm p) {
      return lam("x", a, [&](Tm x) {
        return lam("y", a, [&](Tm y) {
          return lam("e", eq(x, y), [&](Tm e) {
            return lam("px", app(p, x), [&](Tm px) { return transport(p, e, px); });
          });
        });
      });
    });
  });
  Validation v = validate(t, {});
  ASSERT_TRUE(v.ok) << v.message;
  Tm r = lam("A", set_i(), [](Tm a) { return lam("x", a, [](Tm x) { return lam("p", eq(x, x), [](Tm p) { return p; }); }); });
  EXPECT_TRUE(otl_validate(r, {}));
  Tm wrong = lam("A", set_i(), [](Tm a) {
    return lam("x", a, [&](Tm x) { return lam("y", a, [&](Tm y) { return app(lam("p", eq(x, y), [](Tm p) { return p; }), refl()); }); });
  });
  EXPECT_FALSE(otl_validate(wrong, {}));
}

TEST(Validator, Externals) {
  std::vector<ExtDecl> exts{{"E", set(Level::lit(0))}, {"c", ext("E")}};
  EXPECT_TRUE(otl_validate(lam("x", ext("E"), [](Tm x) { return x; }), exts));
  EXPECT_TRUE(otl_validate(app(lam("x", ext("E"), [](Tm x) { return x; }), ext("c")), exts));
  EXPECT_FALSE(otl_validate(app(lam("x", bool_ty(), [](Tm x) { return x; }), ext("c")), exts));
}

TEST(Validator, CorpusOutputsValidate) {
  for (const auto& name : testutil::all_names()) {
    Signature sig = testutil::corpus(name);
    for (What w : kAllWhats) {
      Translation t = translate(sig, w);
      Validation v = validate(t.term, t.externals);
      EXPECT_TRUE(v.ok) << name << " " << to_string(w) << ": " << v.message;
    }
  }
}

TEST(Sexpr, RoundTripsCorpusOutputs) {
  for (const auto& name : testutil::all_names()) {
    Signature sig = testutil::corpus(name);
    for (What w : kAllWhats) {
      Tm t = translate(sig, w).term;
      std::string text = to_sexpr(t);
      Tm back = parse_sexpr(text);
      EXPECT_TRUE(identical(back, t)) << name << " " << to_string(w);
      EXPECT_EQ(to_sexpr(back), text);
    }
  }
}

TEST(Sexpr, RoundTripsRandomOutputs) {
  testgen::Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    testgen::Gen g(rng);
    Signature sig = g.signature(1 + rng.below(12));
    for (What w : kAllWhats) {
      Tm t = translate(sig, w).term;
      EXPECT_TRUE(identical(parse_sexpr(to_sexpr(t)), t));
    }
  }
}

TEST(Sexpr, Literals) {
  Tm t = app(app(ext("f"), {bool_lit(true), fin_lit(2, 5)}), set(Level{true, 1, 3}));
  EXPECT_TRUE(identical(parse_sexpr(to_sexpr(t)), t));
  EXPECT_THROW(parse_sexpr("(Sigma \"g\" (Top)"), Error);
  EXPECT_THROW(parse_sexpr("(Frob)"), Error);
  EXPECT_THROW(parse_sexpr("(Top) (Top)"), Error);
}

TEST(Json, ShapeOfNatAlgebra) {
  auto j = to_json(translate(testutil::corpus("nat"), What::kAlgebra).term);
  EXPECT_EQ(j["node"], "Sigma");
  EXPECT_EQ(j["dom"]["dom"]["dom"]["node"], "Top");
  EXPECT_EQ(j["dom"]["dom"]["body"]["node"], "Set");
  EXPECT_EQ(j["body"]["node"], "Pi");
  EXPECT_THROW(to_json(fresh("x").term()), Error);
}

TEST(Printer, NamesChainComponents) {
  PrintOptions po;
  po.entry_names = {"N", "zero", "suc"};
  EXPECT_EQ(show(nat_algebra(), po), "⊤ × (N : Set i) × (zero : N) × (suc : N → N)");
  po.flatten = true;
  EXPECT_EQ(show(nat_algebra(), po), "(N : Set i) × (zero : N) × (suc : N → N)");
  po.level_arg = 2;
  EXPECT_EQ(show(nat_algebra(), po), "(N : Set 2) × (zero : N) × (suc : N → N)");
  EXPECT_EQ(show(nat_algebra()), "⊤ × (g : _) ▸ Set i × (g : _) ▸ snd g × (g : _) ▸ snd (fst g) → snd (fst g)");
}

}  // namespace
