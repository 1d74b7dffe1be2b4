#include <gtest/gtest.h>

#include "../harness.hpp"
#include "scholia/resolver.hpp"

using namespace scholia;
using scholia::testing::fixture_stack;

namespace {

fixture_stack& stack() {
    static fixture_stack s;
    return s;
}

} // namespace

TEST(AspectRules, DefaultsPick) {
    aspect_rules r;
    EXPECT_EQ(r.pick({item(5)}), aspect::author);
    EXPECT_EQ(r.pick({item(13442814)}), aspect::work);
    EXPECT_EQ(r.pick({item(2217301), item(4830453)}), aspect::publisher);
    EXPECT_EQ(r.pick({item(4830453)}), aspect::organization);
    EXPECT_EQ(r.pick({}), aspect::topic);
    EXPECT_EQ(r.pick({item(424242)}), aspect::topic);
    // human outranks everything
    EXPECT_EQ(r.pick({item(13442814), item(5)}), aspect::author);
}

TEST(AspectRules, SortedByPriority) {
    aspect_rules r;
    for (std::size_t i = 1; i < r.rules().size(); ++i) {
        EXPECT_GE(r.rules()[i - 1].priority, r.rules()[i].priority);
    }
}

TEST(AspectRules, ParseText) {
    auto r = aspect_rules::parse("# custom\nQ7 = venue, 5\n\n  Q8=topic,10  # trailing\n");
    ASSERT_EQ(r.rules().size(), 2u);
    EXPECT_EQ(r.rules()[0], (aspect_rule{item(8), aspect::topic, 10}));
    EXPECT_EQ(r.pick({item(7)}), aspect::venue);
}

TEST(AspectRules, ParseErrors) {
    for (const char* bad : {"Q7 venue 5", "X7 = venue, 5", "Q7 = nowhere, 5", "Q7 = venue, five",
                            "Q7 = venue, 5\nQ7 = topic, 1", "P7 = venue, 5"}) {
        EXPECT_THROW(aspect_rules::parse(bad), precondition_error) << bad;
    }
}

TEST(AspectRules, LoadMissingFile) {
    EXPECT_THROW(aspect_rules::load("/nonexistent/rules.txt"), error);
}

TEST(GuessAspect, FixtureItems) {
    auto& s = stack();
    auto guess = [&](std::uint64_t q) { return guess_aspect(item(q), *s.clients.sparql); };
    EXPECT_EQ(guess(8219), aspect::author);
    EXPECT_EQ(guess(21143764), aspect::work);
    EXPECT_EQ(guess(90001008), aspect::work);
    EXPECT_EQ(guess(90001009), aspect::work);
    EXPECT_EQ(guess(1269766), aspect::organization);
    EXPECT_EQ(guess(564954), aspect::venue);
    EXPECT_EQ(guess(90000602), aspect::venue);
    EXPECT_EQ(guess(90000601), aspect::series);
    EXPECT_EQ(guess(463494), aspect::publisher);
    EXPECT_EQ(guess(90000502), aspect::sponsor);
    EXPECT_EQ(guess(90000401), aspect::topic);
}

TEST(InstanceClasses, Fixture) {
    auto classes = instance_classes(item(8219), *stack().clients.sparql);
    EXPECT_EQ(classes, std::vector<entity_id>{item(5)});
}

TEST(ResolveExternal, Found) {
    auto& c = *stack().clients.sparql;
    EXPECT_EQ(resolve_external("twitter", "utafrith", c), item(8219));
    EXPECT_EQ(resolve_external("github", "fnielsen", c), item(20980928));
    EXPECT_EQ(resolve_external("doi", "10.1371/journal.pone.0006022", c), item(21143764));
    EXPECT_EQ(resolve_external("doi", " 10.1145/2629489 ", c), item(18507561));
}

TEST(ResolveExternal, NotFound) {
    try {
        resolve_external("doi", "10.nope", *stack().clients.sparql);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.kind(), "NotFound");
    }
}

TEST(ResolveExternal, Ambiguous) {
    try {
        resolve_external("orcid", "0000-0002-0000-0009", *stack().clients.sparql);
        FAIL();
    } catch (const ambiguous& e) {
        EXPECT_EQ(e.candidates(), (std::vector<std::string>{"Q90000201", "Q90000203"}));
    }
}

TEST(ResolveExternal, BadInput) {
    EXPECT_THROW(resolve_external("doi", "  ", *stack().clients.sparql), precondition_error);
    EXPECT_THROW(resolve_external("fax", "1", *stack().clients.sparql), precondition_error);
}

TEST(NormalizeExternal, Rules) {
    EXPECT_EQ(normalize_external("doi", " 10.1371/journal.x "), "10.1371/JOURNAL.X");
    EXPECT_EQ(normalize_external("twitter", " utafrith"), "utafrith");
}
