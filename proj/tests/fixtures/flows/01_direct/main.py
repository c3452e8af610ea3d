import tensorflow as tf


def target(x):
    return x + 1


target(tf.constant(1.0))
