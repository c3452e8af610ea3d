import tensorflow as tf


def target(x):
    return x


xs = [tf.one_hot([0, 1], 2)]
target(xs[0])
