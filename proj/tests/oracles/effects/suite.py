COUNT = 0
REGISTRY = []
SETTINGS = {"mode": "eval"}


class Box:
    def __init__(self, value):
        self.value = value

    def bump(self):
        self.value = self.value + 1


class Counter:
    total = 0


def helper_pure(x):
    return x + 1


def helper_print(x):
    print(x)


def e01(x):
    return x * 2 + 1


def e02(x):
    print(x)


def e03():
    global COUNT
    COUNT += 1


def e04(items):
    items.append(1)


def e05(n):
    out = []
    for i in range(n):
        out.append(i)
    return out


def e06(box):
    box.value = 42


def e07():
    return COUNT + len(REGISTRY)


def e08(n):
    b = Box(n)
    b.value = n * 3
    return b.value


def e09(x):
    helper_print(x)


def e10(x):
    return helper_pure(x) * 2


def e11(table):
    table["key"] = 1


def e12(k):
    d = {}
    d[k] = k
    return d


def e13(x):
    REGISTRY.append(x)


def e14(items):
    return sorted(items)


def e15(items):
    items.sort()


def e16(s):
    return s.upper() + s.lower()


def e17(n):
    if n <= 1:
        return 1
    return n * e17(n - 1)


def e18(n):
    if n <= 0:
        print("done")
        return 0
    return e18(n - 1)


def e19():
    total = 0

    def add(v):
        nonlocal total
        total += v

    add(1)
    return total


def e20(items, flag):
    if flag:
        items.append(0)
    return len(items)


def e21():
    Counter.total += 1


def e22(box):
    box.bump()


def e23(items):
    copy = list(items)
    copy.append(5)
    return copy


def e24(pair):
    a, b = pair
    return b, a


def e25(items):
    items += [7]


def e26(table):
    table.update({"x": 2})


def e27(values):
    seen = set()
    for v in values:
        seen.add(v)
    return len(seen)


def e28(items):
    items.extend([1, 2])


def e29(n):
    return sum(i * i for i in range(n))


def e30(n):
    b = Box(0)
    b.bump()
    return b
