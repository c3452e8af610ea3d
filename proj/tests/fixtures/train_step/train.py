import tensorflow as tf

from steps import train_one_step


@tf.function
def train(num_steps):
    for _ in tf.range(num_steps):
        train_one_step()


train(10)
train(20)
train(tf.constant(10))
train(tf.constant(20))
