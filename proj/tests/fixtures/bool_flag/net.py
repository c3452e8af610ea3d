import tensorflow as tf
from tensorflow.keras import Model, layers


class NeuralNet(Model):  # ...
    def __init__(self):
        super().__init__()
        self.fc1 = layers.Dense(8)
        self.fc2 = layers.Dense(8)
        self.out = layers.Dense(2)

    def call(self, x, train=False):
        x = self.fc1(x)
        x = self.fc2(x)
        x = self.out(x)
        if not is_training:
            x = tf.nn.softmax(x)
        return x


net = NeuralNet()
net(tf.ones([1, 4]), train=False)
