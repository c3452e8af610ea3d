import tensorflow as tf


def target(element):
    return element * 2


ds = tf.data.Dataset.from_tensor_slices(tf.ones([4, 2]))
for e in ds:
    target(e)
