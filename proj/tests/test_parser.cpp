#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <random>

#include "support.hpp"

using namespace dk;

namespace {

std::string golden_path(const std::string& module) {
  return std::string(DK_GOLDEN_DIR) + "/" + module + ".printed";
}

bool items_alpha_eq(const SourceItem& a, const SourceItem& b) {
  if (a.value.index() != b.value.index()) return false;
  auto eq = [](const Term& x, const Term& y) { return (!x && !y) || (x && y && alpha_eq(x, y)); };
  if (auto* x = a.get<StaticDecl>()) {
    auto* y = b.get<StaticDecl>();
    return x->name == y->name && eq(x->type, y->type);
  }
  if (auto* x = a.get<DefinableDecl>()) {
    auto* y = b.get<DefinableDecl>();
    return x->name == y->name && eq(x->type, y->type);
  }
  if (auto* x = a.get<Definition>()) {
    auto* y = b.get<Definition>();
    return x->name == y->name && eq(x->type, y->type) && eq(x->body, y->body);
  }
  if (auto* x = a.get<RuleItem>()) {
    auto* y = b.get<RuleItem>();
    return x->vars.size() == y->vars.size() && eq(x->lhs, y->lhs) && eq(x->rhs, y->rhs);
  }
  if (auto* x = a.get<EvalCommand>()) return eq(x->term, b.get<EvalCommand>()->term);
  auto* x = a.get<AssertConv>();
  auto* y = b.get<AssertConv>();
  return eq(x->lhs, y->lhs) && eq(x->rhs, y->rhs);
}

SyntaxErrorKind error_kind(const std::string& text, const std::string& module = "m") {
  try {
    parse_file(text, module);
  } catch (const SyntaxError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for: " << text;
  return SyntaxErrorKind::Lex;
}

}  // namespace

TEST(Parse, StaticDeclaration) {
  auto items = parse_file("type : Type. bool : type.", "hol");
  ASSERT_EQ(items.size(), 2u);
  auto* d = items[1].get<StaticDecl>();
  ASSERT_NE(d, nullptr);
  EXPECT_EQ(d->name, (QName{"hol", "bool"}));
  EXPECT_TRUE(alpha_eq(d->type, constant("hol", "type")));
}

TEST(Parse, DefinitionParametersDesugar) {
  auto items = parse_file("type : Type. def arrow (a : type) (b : type) : type := a.", "m");
  auto* d = items[1].get<Definition>();
  ASSERT_NE(d, nullptr);
  Term ty = constant("m", "type");
  EXPECT_TRUE(alpha_eq(d->body, Term::lam("a", ty, Term::lam("b", ty, Term::var(1)))));
  EXPECT_TRUE(alpha_eq(d->type, Term::pi("a", ty, Term::pi("b", ty, ty))));
}

TEST(Parse, DefinableWithoutBody) {
  auto items = parse_file("def f : Type -> Type.", "m");
  EXPECT_NE(items[0].get<DefinableDecl>(), nullptr);
}

TEST(Parse, RuleContext) {
  auto items = parse_file("[a,b] hol.arrow a b --> holtypes.arrow a b.", "bridge");
  auto* r = items[0].get<RuleItem>();
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->vars.size(), 2u);
  Term lhs = apps(constant("hol", "arrow"), {Term::var(1), Term::var(0)});
  EXPECT_TRUE(alpha_eq(r->lhs, lhs));
  EXPECT_TRUE(alpha_eq(r->rhs, apps(constant("holtypes", "arrow"), {Term::var(1), Term::var(0)})));
}

TEST(Parse, RuleContextTypesAreIgnored) {
  auto a = parse_file("def f : Type -> Type. [x : hol.type] f x --> x.", "m");
  auto b = parse_file("def f : Type -> Type. [x] f x --> x.", "m");
  EXPECT_TRUE(items_alpha_eq(a[1], b[1]));
}

TEST(Parse, Commands) {
  auto items = parse_file("c : Type. #EVAL c. #ASSERT c == c.", "m");
  EXPECT_NE(items[1].get<EvalCommand>(), nullptr);
  EXPECT_NE(items[2].get<AssertConv>(), nullptr);
}

TEST(Parse, BindersAndArrows) {
  Term t = parse_term("A : Type -> B : Type -> A -> B");
  Term expect = Term::pi("A", Term::type(), Term::pi("B", Term::type(), Term::pi("_", Term::var(1), Term::var(1))));
  EXPECT_TRUE(alpha_eq(t, expect));
  Term l = parse_term("x : Type => y => x y");
  EXPECT_TRUE(alpha_eq(l, Term::lam("x", Term::type(), Term::lam("y", {}, Term::app(Term::var(1), Term::var(0))))));
  // application binds tighter, arrows associate to the right
  Term f = parse_term("c.f c.a -> c.b -> c.c");
  EXPECT_TRUE(f.is(TermKind::Pi));
  EXPECT_TRUE(f.domain().is(TermKind::App));
  EXPECT_TRUE(f.body().is(TermKind::Pi));
}

TEST(Parse, AnnotatedDomainMayEndInIdentifier) {
  Term t = parse_term("A : Type => x : A => x");
  EXPECT_TRUE(alpha_eq(t, Term::lam("A", Term::type(), Term::lam("x", Term::var(0), Term::var(0)))));
  Term u = parse_term("F : (Type -> Type) => A : Type => x : F A => x");
  EXPECT_TRUE(u.body().body().domain().is(TermKind::App));
}

TEST(Parse, NestedComments) {
  auto items = parse_file("(; outer (; inner ;) still outer ;) c : Type.", "m");
  EXPECT_EQ(items.size(), 1u);
}

TEST(ParseErrors, Kinds) {
  EXPECT_EQ(error_kind("c : Type"), SyntaxErrorKind::Parse);
  EXPECT_EQ(error_kind("c : d."), SyntaxErrorKind::Scope);
  EXPECT_EQ(error_kind("c : m.d."), SyntaxErrorKind::Scope);
  EXPECT_EQ(error_kind("c : Type $"), SyntaxErrorKind::Lex);
  EXPECT_EQ(error_kind("c : Kind."), SyntaxErrorKind::Parse);
  EXPECT_EQ(error_kind("(; open"), SyntaxErrorKind::Lex);
  EXPECT_EQ(error_kind("c : \xce\xbb."), SyntaxErrorKind::Lex);
}

TEST(ParseErrors, CarryPosition) {
  try {
    parse_file("c : Type.\n  d : e.", "m");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.pos().line, 2u);
    EXPECT_EQ(e.pos().column, 7u);
  }
}

// Random byte strings and token soups must produce errors, never crashes.
TEST(ParseErrors, FuzzedInputs) {
  std::mt19937 rng(42);
  const std::vector<std::string> toks = {"def", "c", "m.x", ":", ":=", "-->", "[", "]", ",", "(", ")", "=>",
                                         "->", ".", "Type", "#EVAL", "#ASSERT", "==", "(;", ";)", "x", "\n"};
  int accepted = 0;
  for (int i = 0; i < 3000; ++i) {
    std::string s;
    int len = std::uniform_int_distribution<int>(0, 20)(rng);
    for (int k = 0; k < len; ++k) {
      if (i % 3 == 0)
        s += static_cast<char>(std::uniform_int_distribution<int>(1, 255)(rng));
      else
        s += toks[std::uniform_int_distribution<std::size_t>(0, toks.size() - 1)(rng)] + " ";
    }
    try {
      parse_file(s, "m");
      ++accepted;
    } catch (const SyntaxError& e) {
      ASSERT_GT(e.pos().line, 0u);
    }
  }
  EXPECT_GT(accepted, 0);
}

TEST(Print, Basics) {
  EXPECT_EQ(print_term(constant("coq", "prop")), "coq.prop");
  EXPECT_EQ(print_term(Term::pi("l", constant("c", "A"), constant("c", "B"))), "l : c.A -> c.B");
  EXPECT_EQ(print_term(Term::pi("_", constant("c", "A"), constant("c", "B"))), "c.A -> c.B");
  EXPECT_EQ(print_term(Term::pi("l", constant("c", "A"), Term::app(constant("c", "B"), Term::var(0)))),
            "l : c.A -> c.B l");
  EXPECT_EQ(print_term(parse_term("x => y => x (y x)")), "x => y => x (y x)");
}

TEST(Print, ShadowedNamesAreRenamed) {
  Term t = Term::lam("x", {}, Term::lam("x", {}, Term::var(1)));
  std::string s = print_term(t);
  EXPECT_TRUE(alpha_eq(parse_term(s), t)) << s;
}

TEST(Print, RoundTripsCorpus) {
  for (const auto& f : corpus_files()) {
    auto items = parse_file(f.source, f.module);
    std::string printed = print_items(items);
    auto again = parse_file(printed, f.module);
    ASSERT_EQ(items.size(), again.size()) << f.module;
    for (std::size_t i = 0; i < items.size(); ++i)
      ASSERT_TRUE(items_alpha_eq(items[i], again[i])) << f.module << " item " << i;
    // printing is a fixpoint after one round
    EXPECT_EQ(print_items(again), printed) << f.module;
  }
}

TEST(Print, GoldenCorpus) {
  bool update = std::getenv("DK_UPDATE_GOLDEN") != nullptr;
  for (const auto& f : corpus_files()) {
    std::string printed = print_items(parse_file(f.source, f.module));
    if (update) {
      std::ofstream(golden_path(f.module), std::ios::binary) << printed;
      continue;
    }
    std::string golden = read_text_file(golden_path(f.module));
    EXPECT_EQ(printed, golden) << f.module;
  }
}
