#include "hybridize/summaries/summary_db.h"

namespace hybridize::summaries {

extern const char* const kDefaultSummaries;

const char* const kDefaultSummaries = R"(# Tensor generators.
generator tf.Tensor alias=tf.experimental.numpy.ndarray kind=tensor tensorlike=false
generator tf.sparse.SparseTensor alias=tf.SparseTensor kind=tensor tensorlike=false
generator tf.ones kind=tensor tensorlike=false
generator tf.fill kind=tensor tensorlike=false
generator tf.zeros kind=tensor tensorlike=false
generator tf.one_hot kind=tensor tensorlike=false
generator tf.eye alias=tf.linalg.eye kind=tensor tensorlike=false
generator tf.Variable kind=tensor tensorlike=true
generator tf.constant kind=tensor tensorlike=false
generator tf.convert_to_tensor kind=tensor tensorlike=false
generator tf.keras.Input alias=tf.keras.layers.Input,keras.Input,keras.layers.Input kind=tensor tensorlike=true
generator tf.range kind=tensor tensorlike=false
generator tf.random.uniform kind=tensor tensorlike=false
generator tf.random.normal kind=tensor tensorlike=false
generator tf.ones_like kind=tensor tensorlike=false
generator tf.zeros_like kind=tensor tensorlike=false
generator tf.RaggedTensor kind=tensor tensorlike=false

# Dataset generators.
generator tf.Dataset.from_tensor_slices alias=tf.data.Dataset.from_tensor_slices kind=dataset tensorlike=false
generator tf.Dataset.range alias=tf.data.Dataset.range kind=dataset tensorlike=false
generator tf.Dataset.from_tensors alias=tf.data.Dataset.from_tensors kind=dataset tensorlike=false
generator tf.Dataset.from_generator alias=tf.data.Dataset.from_generator kind=dataset tensorlike=false

# Library code runs in the TensorFlow runtime, not as Python side effects.
effect tf.* pure
effect keras.* pure
effect numpy.* pure
effect math.* pure
effect functools.* pure
effect itertools.* pure
effect operator.* pure
effect collections.* pure
effect typing.* pure
effect abc.* pure
effect copy.* pure
effect dataclasses.* pure
effect os.path.* pure
effect os.* external
effect sys.* external
effect time.* external
effect logging.* external
effect warnings.* external
effect random.* external

# Builtins.
effect builtins.print external
effect builtins.input external
effect builtins.open external
effect builtins.exit external
effect builtins.quit external
effect builtins.breakpoint external
effect builtins.help external
effect builtins.exec external
effect builtins.eval external
effect builtins.compile external
effect builtins.__import__ external
effect builtins.setattr mutates-receiver
effect builtins.delattr mutates-receiver
effect builtins.abs pure
effect builtins.all pure
effect builtins.any pure
effect builtins.ascii pure
effect builtins.bin pure
effect builtins.bool pure
effect builtins.bytearray pure
effect builtins.bytes pure
effect builtins.callable pure
effect builtins.chr pure
effect builtins.classmethod pure
effect builtins.complex pure
effect builtins.dict pure
effect builtins.dir pure
effect builtins.divmod pure
effect builtins.enumerate pure
effect builtins.filter pure
effect builtins.float pure
effect builtins.format pure
effect builtins.frozenset pure
effect builtins.getattr pure
effect builtins.hasattr pure
effect builtins.hash pure
effect builtins.hex pure
effect builtins.id pure
effect builtins.int pure
effect builtins.isinstance pure
effect builtins.issubclass pure
effect builtins.iter pure
effect builtins.len pure
effect builtins.list pure
effect builtins.map pure
effect builtins.max pure
effect builtins.min pure
effect builtins.next pure
effect builtins.object pure
effect builtins.object.__init__ pure
effect builtins.oct pure
effect builtins.ord pure
effect builtins.pow pure
effect builtins.property pure
effect builtins.range pure
effect builtins.repr pure
effect builtins.reversed pure
effect builtins.round pure
effect builtins.set pure
effect builtins.slice pure
effect builtins.sorted pure
effect builtins.staticmethod pure
effect builtins.str pure
effect builtins.sum pure
effect builtins.super pure
effect builtins.tuple pure
effect builtins.type pure
effect builtins.vars pure
effect builtins.zip pure
effect builtins.Exception pure
effect builtins.ValueError pure
effect builtins.TypeError pure
effect builtins.KeyError pure
effect builtins.IndexError pure
effect builtins.RuntimeError pure
effect builtins.NotImplementedError pure
effect builtins.AssertionError pure
effect builtins.AttributeError pure
effect builtins.StopIteration pure

# Container methods.
effect list.append mutates-receiver
effect list.extend mutates-receiver
effect list.insert mutates-receiver
effect list.remove mutates-receiver
effect list.pop mutates-receiver
effect list.clear mutates-receiver
effect list.sort mutates-receiver
effect list.reverse mutates-receiver
effect list.__setitem__ mutates-receiver
effect list.__delitem__ mutates-receiver
effect list.* pure
effect dict.update mutates-receiver
effect dict.pop mutates-receiver
effect dict.popitem mutates-receiver
effect dict.setdefault mutates-receiver
effect dict.clear mutates-receiver
effect dict.__setitem__ mutates-receiver
effect dict.__delitem__ mutates-receiver
effect dict.* pure
effect set.add mutates-receiver
effect set.discard mutates-receiver
effect set.remove mutates-receiver
effect set.pop mutates-receiver
effect set.clear mutates-receiver
effect set.update mutates-receiver
effect set.intersection_update mutates-receiver
effect set.difference_update mutates-receiver
effect set.symmetric_difference_update mutates-receiver
effect set.* pure
effect tuple.* pure
effect str.* pure
effect bytes.* pure
effect int.* pure
effect float.* pure
effect bool.* pure
effect complex.* pure
effect NoneType.* pure

# Speculative keywords, matched against function names.
keyword train weight=1
keyword step weight=1
keyword loss weight=1
keyword grad weight=1
keyword logits weight=1
keyword batch weight=1
keyword epoch weight=1
keyword model weight=1
keyword tensor weight=1
keyword optimizer weight=1
keyword forward weight=1
)";

}  // namespace hybridize::summaries
