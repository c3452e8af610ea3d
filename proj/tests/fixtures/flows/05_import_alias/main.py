from tensorflow import constant as const


def target(x):
    return x


target(const([1, 2, 3]))
