import tensorflow as tf


def target(pair):
    first, second = pair
    return first


target((tf.eye(2), tf.eye(3)))
