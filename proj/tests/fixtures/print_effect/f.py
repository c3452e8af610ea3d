def f(x):
    print(x)
f(1)
f(1)
f(2)
