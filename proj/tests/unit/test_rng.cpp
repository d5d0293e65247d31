#include <gtest/gtest.h>

#include <set>

#include "kljn/rng.hpp"

using namespace kljn;

TEST(Rng, SameLabelSameStream) {
  const StreamId id{Purpose::kEnsemble, 17, Party::kBob, Role::kHigh};
  auto a = make_engine(42, id);
  auto b = make_engine(42, id);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a(), b());
}

TEST(Rng, EveryLabelFieldChangesTheKey) {
  const StreamId base{Purpose::kEnsemble, 3, Party::kAlice, Role::kLow};
  std::set<std::uint64_t> keys{derive_key(1, base), derive_key(2, base)};
  auto id = base;
  id.purpose = Purpose::kEvaluation;
  keys.insert(derive_key(1, id));
  id = base;
  id.bit = 4;
  keys.insert(derive_key(1, id));
  id = base;
  id.party = Party::kBob;
  keys.insert(derive_key(1, id));
  id = base;
  id.role = Role::kHigh;
  keys.insert(derive_key(1, id));
  EXPECT_EQ(keys.size(), 6u);
}

TEST(Rng, Mix64IsNotIdentity) {
  EXPECT_NE(mix64(0), mix64(1));
  EXPECT_NE(mix64(1), 1u);
}
