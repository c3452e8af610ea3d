import tensorflow as tf


def target(xs):
    return [t * 2 for t in xs]


target([tf.ones([2]), tf.ones([3])])
