#include <gtest/gtest.h>

#include "hybridize/graphs/entry_points.h"
#include "oracles.h"
#include "testing.h"

namespace hybridize::graphs {
namespace {

using testing::analyze_sources;

int id_of(const driver::Analysis& a, const std::string& fq) {
  const frontend::FunctionUnit* f = a.program.find_function(fq);
  return f != nullptr ? f->id : -1;
}

bool calls(const driver::Analysis& a, const std::string& caller, const std::string& callee) {
  int from = id_of(a, caller);
  int to = id_of(a, callee);
  for (const CallEdge& e : a.graphs.call_graph.edges()) {
    if (e.caller == from && e.callee == to) return true;
  }
  return false;
}

TEST(EntryPoints, ScriptsAndTests) {
  auto a = analyze_sources({{"lib.py", "def f():\n    pass\n"},
                            {"run.py", "from lib import f\nf()\n"},
                            {"test_lib.py", "from lib import f\n\ndef test_f():\n    f()\n\ndef helper():\n    pass\n"}});
  std::vector<std::string> targets;
  for (const EntryPoint& e : a->entries) targets.push_back(e.target);
  EXPECT_NE(std::find(targets.begin(), targets.end(), "run"), targets.end());
  EXPECT_NE(std::find(targets.begin(), targets.end(), "test_lib.test_f"), targets.end());
  EXPECT_EQ(std::find(targets.begin(), targets.end(), "lib"), targets.end());
  EXPECT_EQ(std::find(targets.begin(), targets.end(), "test_lib.helper"), targets.end());
  EXPECT_TRUE(is_test_file("pkg/test_x.py"));
  EXPECT_TRUE(is_test_file("x_test.py"));
  EXPECT_FALSE(is_test_file("testing.py"));
}

TEST(EntryPoints, PytestDiscoveryCanBeDisabled) {
  ToolConfig c;
  c.pytest_entry_points = false;
  auto a = analyze_sources({{"test_lib.py", "def test_f():\n    pass\n"}}, c);
  EXPECT_TRUE(a->entries.empty());
  const auto* r = testing::find_record(*a, "test_lib.test_f");
  ASSERT_NE(r, nullptr);
  EXPECT_TRUE(r->verdict.failures.count(refactor::Failure::F4));
}

TEST(CallGraph, FunctorsResolveToCallMethods) {
  auto a = analyze_sources({{"m.py",
                             "import tensorflow as tf\n\n"
                             "class Plain:\n"
                             "    def __call__(self, x):\n"
                             "        return x\n\n"
                             "class Net(tf.keras.Model):\n"
                             "    def call(self, x):\n"
                             "        return x\n\n"
                             "p = Plain()\n"
                             "p(1)\n"
                             "n = Net()\n"
                             "n(tf.ones([1]))\n"}});
  EXPECT_TRUE(calls(*a, "m.<module>", "m.Plain.__call__"));
  EXPECT_TRUE(is_reachable(a->graphs.call_graph, id_of(*a, "m.Net.call")));
}

TEST(CallGraph, LibraryCallbacks) {
  auto a = analyze_sources({{"m.py",
                             "def double(v):\n"
                             "    return v * 2\n\n"
                             "result = list(map(double, [1, 2]))\n"}});
  EXPECT_TRUE(is_reachable(a->graphs.call_graph, id_of(*a, "m.double")));
}

TEST(CallGraph, UnreachableHelperIsF4) {
  auto a = analyze_sources({{"m.py", "def used():\n    pass\n\ndef unused():\n    pass\n\nused()\n"}});
  EXPECT_FALSE(is_reachable(a->graphs.call_graph, id_of(*a, "m.unused")));
  EXPECT_TRUE(testing::find_record(*a, "m.unused")->verdict.failures.count(refactor::Failure::F4));
}

TEST(Recursion, DirectMutualAndAcyclic) {
  auto a = analyze_sources({{"m.py",
                             "def fact(n):\n    return 1 if n < 2 else n * fact(n - 1)\n\n"
                             "def even(n):\n    return n == 0 or odd(n - 1)\n\n"
                             "def odd(n):\n    return n != 0 and even(n - 1)\n\n"
                             "def leaf(n):\n    return n\n\n"
                             "fact(3)\neven(4)\nleaf(1)\n"}});
  const CallGraph& cg = a->graphs.call_graph;
  EXPECT_TRUE(is_recursive(cg, id_of(*a, "m.fact")));
  EXPECT_TRUE(is_recursive(cg, id_of(*a, "m.even")));
  EXPECT_TRUE(is_recursive(cg, id_of(*a, "m.odd")));
  EXPECT_FALSE(is_recursive(cg, id_of(*a, "m.leaf")));
}

TEST(Recursion, MatchesClosureOnSmallGraphs) {
  std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {2, 0}, {3, 3}, {4, 5}};
  CallGraph cg = CallGraph::from_edges(6, edges);
  std::vector<bool> expected = testing::cyclic_nodes(6, edges);
  for (int v = 0; v < 6; ++v) EXPECT_EQ(is_recursive(cg, v), expected[static_cast<std::size_t>(v)]) << v;
}

TEST(CallGraph, DotOutput) {
  auto a = analyze_sources({{"m.py", "def f():\n    pass\n\nf()\n"}});
  std::string dot = driver::render_callgraph(*a);
  EXPECT_EQ(dot.rfind("digraph callgraph {", 0), 0u);
  EXPECT_NE(dot.find("m.f"), std::string::npos);
  EXPECT_NE(dot.find("->"), std::string::npos);
}

TEST(Dataflow, TensorReachesParameterThroughCalls) {
  auto a = analyze_sources({{"m.py",
                             "import tensorflow as tf\n\n"
                             "def g(y):\n    return y\n\n"
                             "def f(x):\n    return g(x)\n\n"
                             "f(tf.zeros([2]))\n"}});
  const DataflowGraph& g = a->graphs.dataflow;
  int param = g.param_node(id_of(*a, "m.g"), 0);
  ASSERT_GE(param, 0);
  bool tensor = false;
  for (int o : g.pts(param)) tensor |= g.object(o).kind == ObjectKind::Tensor && g.object(o).api == "tensorflow.zeros";
  EXPECT_TRUE(tensor);
}

}  // namespace
}  // namespace hybridize::graphs
