import tensorflow as tf


def train_one_step():
    return tf.reduce_sum(tf.ones([2, 2]))
