#include <gtest/gtest.h>

#include "testing.h"

namespace hybridize::effects {
namespace {

using testing::analyze_sources;
using testing::find_record;

std::set<WitnessReason> reasons(const driver::Analysis& a, const std::string& fq) {
  std::set<WitnessReason> out;
  for (const EffectWitness& w : find_record(a, fq)->effects.witnesses) out.insert(w.reason);
  return out;
}

TEST(Effects, WitnessReasons) {
  auto a = analyze_sources({{"m.py",
                             "G = 0\n\n"
                             "class Box:\n    pass\n\n"
                             "def glob():\n    global G\n    G = 1\n\n"
                             "def param(xs):\n    xs.append(1)\n\n"
                             "class A:\n    def set(self):\n        self.v = 1\n\n"
                             "def printing():\n    print('x')\n\n"
                             "def unknown():\n    import mystery\n    mystery.run()\n\n"
                             "def local():\n    b = Box()\n    b.v = 1\n    return b\n\n"
                             "glob()\nparam([])\nA().set()\nprinting()\nunknown()\nlocal()\n"}});
  EXPECT_EQ(reasons(*a, "m.glob"), std::set<WitnessReason>{WitnessReason::GlobalWrite});
  EXPECT_EQ(reasons(*a, "m.param"), std::set<WitnessReason>{WitnessReason::ParameterMutation});
  EXPECT_EQ(reasons(*a, "m.A.set"), std::set<WitnessReason>{WitnessReason::InstanceFieldWrite});
  EXPECT_EQ(reasons(*a, "m.printing"), std::set<WitnessReason>{WitnessReason::EffectingBuiltin});
  EXPECT_TRUE(reasons(*a, "m.unknown").count(WitnessReason::UnknownCallee));
  EXPECT_TRUE(reasons(*a, "m.local").empty());
}

TEST(Effects, TransitiveThroughCallees) {
  auto a = analyze_sources({{"m.py",
                             "def inner():\n    print(1)\n\n"
                             "def outer():\n    inner()\n\n"
                             "def pure(x):\n    return x + 1\n\n"
                             "outer()\npure(1)\n"}});
  EXPECT_TRUE(find_record(*a, "m.outer")->verdict.se);
  const auto& w = find_record(*a, "m.outer")->effects.witnesses;
  ASSERT_FALSE(w.empty());
  EXPECT_EQ(w.front().line, 2u);
  EXPECT_FALSE(find_record(*a, "m.pure")->verdict.se);
}

TEST(Effects, TensorflowOpsAreNotPythonEffects) {
  auto a = analyze_sources({{"m.py",
                             "import tensorflow as tf\n\n"
                             "def f(x):\n    y = tf.nn.relu(x)\n    return tf.reduce_sum(y)\n\n"
                             "f(tf.ones([2]))\n"}});
  EXPECT_FALSE(find_record(*a, "m.f")->verdict.se);
}

TEST(Effects, ModRefRecordsReads) {
  auto a = analyze_sources({{"m.py", "G = [1]\n\ndef f():\n    return G[0]\n\nf()\n"}});
  ModRefMap m = compute_mod_ref(a->program, a->graphs.call_graph, a->graphs.dataflow, a->db);
  int f = a->program.find_function("m.f")->id;
  EXPECT_TRUE(m.mod[static_cast<std::size_t>(f)].empty());
  EXPECT_FALSE(m.ref[static_cast<std::size_t>(f)].empty());
}

}  // namespace
}  // namespace hybridize::effects
