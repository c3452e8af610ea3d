import tensorflow as tf


class Holder:
    def __init__(self):
        self.weights = tf.Variable(1.0)


def target(x):
    return x.numpy()


h = Holder()
target(h.weights)
