#include <gtest/gtest.h>

#include "oracles.h"
#include "testing.h"

namespace hybridize::transform {
namespace {

using testing::analyze_sources;

std::string rewritten(const driver::Analysis& a, const std::string& path) {
  auto files = rewrite(a.script, a.project);
  auto it = files.find(path);
  return it == files.end() ? std::string() : it->second;
}

const char* kBody =
    "def f(x):\n"
    "    return x\n\n"
    "f(tf.ones([1]))\n";

TEST(Transform, ImportGoesAfterDocstringAndFuture) {
  std::string src = std::string("\"\"\"Doc.\"\"\"\nfrom __future__ import annotations\nimport os\n\n") + kBody;
  auto a = analyze_sources({{"m.py", src}});
  EXPECT_EQ(rewritten(*a, "m.py"),
            "\"\"\"Doc.\"\"\"\nfrom __future__ import annotations\nimport tensorflow as tf\nimport os\n\n"
            "@tf.function\ndef f(x):\n    return x\n\nf(tf.ones([1]))\n");
}

TEST(Transform, ExistingAliasIsReused) {
  auto a = analyze_sources({{"m.py", std::string("import tensorflow as tfx\n\n") +
                                         "def f(x):\n    return x\n\nf(tfx.ones([1]))\n"}});
  EXPECT_EQ(rewritten(*a, "m.py"), "import tensorflow as tfx\n\n@tfx.function\ndef f(x):\n    return x\n\nf(tfx.ones([1]))\n");
  auto b = analyze_sources({{"m.py", "import tensorflow\n\ndef f(x):\n    return x\n\nf(tensorflow.ones([1]))\n"}});
  EXPECT_EQ(rewritten(*b, "m.py"),
            "import tensorflow\n\n@tensorflow.function\ndef f(x):\n    return x\n\nf(tensorflow.ones([1]))\n");
}

TEST(Transform, DecoratorIsOutermostAndNoted) {
  auto a = analyze_sources({{"m.py",
                             "import functools\nimport tensorflow as tf\n\n"
                             "class A:\n"
                             "    @functools.lru_cache()\n"
                             "    def f(self, x):\n"
                             "        return x\n\n"
                             "A().f(tf.ones([1]))\n"}});
  EXPECT_EQ(rewritten(*a, "m.py"),
            "import functools\nimport tensorflow as tf\n\nclass A:\n    @tf.function\n    @functools.lru_cache()\n"
            "    def f(self, x):\n        return x\n\nA().f(tf.ones([1]))\n");
  std::string report = driver::render_report(*a);
  EXPECT_NE(report.find("decorator_placed_outermost: above @functools.lru_cache"), std::string::npos);
}

TEST(Transform, CallFormDecoratorRemovedWhole) {
  std::string src =
      "import tensorflow as tf\n\n"
      "@tf.function(\n"
      "    reduce_retracing=True)\n"
      "def f(n):\n"
      "    return n\n\n"
      "f(1)\n";
  auto a = analyze_sources({{"m.py", src}});
  EXPECT_EQ(rewritten(*a, "m.py"), "import tensorflow as tf\n\ndef f(n):\n    return n\n\nf(1)\n");
}

TEST(Transform, CrlfAndTabsPreserved) {
  std::string src = "import tensorflow as tf\r\n\r\nclass A:\r\n\tdef f(self, x):\r\n\t\treturn x\r\n\r\nA().f(tf.ones([1]))\r\n";
  auto a = analyze_sources({{"m.py", src}});
  EXPECT_EQ(rewritten(*a, "m.py"),
            "import tensorflow as tf\r\n\r\nclass A:\r\n\t@tf.function\r\n\tdef f(self, x):\r\n\t\treturn x\r\n\r\n"
            "A().f(tf.ones([1]))\r\n");
}

TEST(Transform, ApplyEditsDescending) {
  std::vector<Edit> edits = {
      {"m.py", EditKind::InsertImport, 1, 0, 0, 0, "import tensorflow as tf\n", {}},
      {"m.py", EditKind::InsertDecorator, 1, 0, 0, 0, "@tf.function\n", "m.f"},
      {"m.py", EditKind::RemoveDecorator, 4, 0, 15, 13, {}, "m.g"},
  };
  EXPECT_EQ(apply_edits("def f(x): pass\n@tf.function\ndef g(): pass\n", edits),
            "import tensorflow as tf\n@tf.function\ndef f(x): pass\ndef g(): pass\n");
}

TEST(Diff, MatchesReferenceOnEdgeCases) {
  std::vector<std::pair<std::string, std::string>> cases = {
      {"a\nb\nc\n", "a\nX\nb\nc\n"},
      {"a\nb\nc", "a\nb\nc\nd"},
      {"a\nb\nc", "a\nb\nC"},
      {"", "new\n"},
      {"only\n", ""},
      {"1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n11\n12\n13\n14\n15\n16\n",
       "0\n1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n11\n12\n13\n14\n15\n16\n17\n"},
      {"1\n2\n3\n4\n5\n6\n7\n8\n9\n", "1\nX\n2\n3\n4\n5\n6\n7\nY\n8\n9\n"},
      {"1\n2\n3\n4\n5\n6\n7\n8\n9\n", "1\nX\n2\n3\n4\n5\n6\n7\n8\nY\n9\n"},
  };
  for (const auto& [before, after] : cases) {
    EXPECT_EQ(unified_diff("f.py", before, after), testing::reference_diff("f.py", before, after))
        << "before:\n" << before << "after:\n" << after;
  }
}

TEST(Diff, MatchesReferenceOnSyntheticCorpus) {
  auto files = testing::synthetic_corpus(600, 3);
  auto a = analyze_sources(files);
  ASSERT_FALSE(a->script.empty());
  auto out = rewrite(a->script, a->project);
  for (const auto& [path, before] : files) {
    auto it = out.find(path);
    if (it == out.end()) continue;
    EXPECT_EQ(unified_diff(path, before, it->second), testing::reference_diff(path, before, it->second)) << path;
  }
}

TEST(Transform, TreeDiffDetectsForeignChanges) {
  std::vector<Edit> edits = {{"m.py", EditKind::InsertDecorator, 1, 0, 0, 0, "@tf.function\n", "m.f"}};
  EXPECT_EQ(testing::tree_diff("def f(x):\n    return x\n", "@tf.function\ndef f(x):\n    return x\n", edits, "m"), "");
  EXPECT_NE(testing::tree_diff("def f(x):\n    return x\n", "@tf.function\ndef f(x):\n    return x + 1\n", edits, "m"), "");
}

}  // namespace
}  // namespace hybridize::transform
