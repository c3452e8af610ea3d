import tensorflow as tf


def target(element):
    return element * 3


ds = tf.data.Dataset.from_tensor_slices([1.0, 2.0])
ds = ds.map(target)
