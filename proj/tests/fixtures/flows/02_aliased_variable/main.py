import tensorflow as tf


def target(x):
    return x * 2


a = tf.ones([2])
b = a
c = b
target(c)
