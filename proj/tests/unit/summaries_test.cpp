#include <gtest/gtest.h>

#include "hybridize/summaries/summary_db.h"
#include "testing.h"

namespace hybridize::summaries {
namespace {

TEST(Summaries, DefaultGeneratorsAndAliases) {
  const SummaryDb& db = SummaryDb::defaults();
  for (const char* api : {"tensorflow.ones", "tensorflow.fill", "tensorflow.zeros", "tensorflow.one_hot",
                          "tensorflow.eye", "tensorflow.linalg.eye", "tensorflow.Variable", "tensorflow.constant",
                          "tensorflow.convert_to_tensor", "tensorflow.keras.Input", "tensorflow.keras.layers.Input",
                          "tensorflow.range", "tensorflow.Tensor", "tensorflow.experimental.numpy.ndarray",
                          "tensorflow.sparse.SparseTensor", "tensorflow.SparseTensor"}) {
    const GeneratorSpec* g = db.generator(api);
    ASSERT_NE(g, nullptr) << api;
    EXPECT_EQ(g->kind, GeneratorKind::Tensor) << api;
  }
  EXPECT_TRUE(db.generator("tensorflow.Variable")->tensor_like);
  EXPECT_TRUE(db.generator("tensorflow.keras.Input")->tensor_like);
  EXPECT_FALSE(db.generator("tensorflow.constant")->tensor_like);
  EXPECT_EQ(db.generator("tensorflow.data.Dataset.from_tensor_slices")->kind, GeneratorKind::Dataset);
  EXPECT_EQ(db.generator("tensorflow.Dataset.range")->kind, GeneratorKind::Dataset);
  EXPECT_EQ(db.generator("tensorflow.add"), nullptr);
}

TEST(Summaries, EffectsExactBeforeWildcard) {
  const SummaryDb& db = SummaryDb::defaults();
  EXPECT_EQ(db.effect("builtins.print")->effect, Effect::ExternalSideEffect);
  EXPECT_EQ(db.effect("list.append")->effect, Effect::MutatesReceiver);
  EXPECT_EQ(db.effect("list.index")->effect, Effect::Pure);
  EXPECT_EQ(db.effect("tensorflow.nn.softmax")->effect, Effect::Pure);
  EXPECT_EQ(db.effect("somelib.thing"), nullptr);
  EXPECT_TRUE(db.knows("tensorflow"));
}

TEST(Summaries, FormatRoundTrips) {
  const SummaryDb& db = SummaryDb::defaults();
  EXPECT_EQ(SummaryDb::parse(db.format()), db);
}

TEST(Summaries, CanonicalApi) {
  EXPECT_EQ(canonical_api("tf.ones"), "tensorflow.ones");
  EXPECT_EQ(canonical_api("numpy.ones"), "numpy.ones");
}

TEST(Summaries, UserFilesExtendDefaults) {
  testing::TempDir dir;
  testing::write_file(dir.path() / "extra.txt",
                      "generator mylib.make_tensor kind=tensor tensorlike=false\neffect mylib.log external\n");
  SummaryDb db = load_summaries({dir.path() / "extra.txt"});
  ASSERT_NE(db.generator("mylib.make_tensor"), nullptr);
  EXPECT_EQ(db.effect("mylib.log")->effect, Effect::ExternalSideEffect);
  EXPECT_NE(db.generator("tensorflow.ones"), nullptr);
}

TEST(Summaries, MalformedFileNamesTheLine) {
  try {
    SummaryDb::parse("effect a.b pure\neffect c.d sometimes\n", "bad.txt");
    FAIL() << "expected SummaryError";
  } catch (const SummaryError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("bad.txt"), std::string::npos);
    EXPECT_NE(msg.find('2'), std::string::npos);
  }
  EXPECT_THROW(load_summaries({"/no/such/summary/file"}), SummaryError);
}

}  // namespace
}  // namespace hybridize::summaries
