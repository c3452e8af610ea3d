import tensorflow as tf
from tensorflow.keras import Model, layers
from tensorflow.keras.layers import Dropout


class SequentialModel(Model):
    def __init__(self, **kwargs):
        super(SequentialModel, self).__init__(**kwargs)
        self.flatten = layers.Flatten(input_shape=(28, 28))
        num_layers = 100  # Add layers.
        self.layers = [layers.Dense(64, activation="relu") for n in range(num_layers)]
        self.dropout = Dropout(0.2)
        self.dense_2 = layers.Dense(10)

    @tf.function
    def __call__(self, x):
        x = self.flatten(x)
        for layer in self.layers:
            x = layer(x)
        x = self.dropout(x)
        x = self.dense_2(x)
        return x


d = tf.random.uniform([20, 28, 28])
model = SequentialModel()
model(d)
