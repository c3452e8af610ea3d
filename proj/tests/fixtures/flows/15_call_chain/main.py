import tensorflow as tf


def target(x):
    return x


def middle(y):
    return target(y)


def outer(z):
    return middle(z)


outer(tf.convert_to_tensor([1.0]))
