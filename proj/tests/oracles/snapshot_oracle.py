"""Runs each top-level call of main.py and reports whether it changed state
visible outside the callee: module globals, class attributes, objects
reachable from the driver's variables, or standard output."""

import ast
import contextlib
import importlib
import io
import json
import os
import sys


def state(v, depth=0):
    if depth > 8:
        return "..."
    if isinstance(v, (int, float, str, bytes, bool, type(None))):
        return v
    if isinstance(v, (list, tuple)):
        return (type(v).__name__, tuple(state(x, depth + 1) for x in v))
    if isinstance(v, (set, frozenset)):
        return (type(v).__name__, tuple(sorted(repr(x) for x in v)))
    if isinstance(v, dict):
        return ("dict", tuple((repr(k), state(x, depth + 1)) for k, x in v.items()))
    if isinstance(v, type):
        fields = []
        for k, x in vars(v).items():
            if k.startswith("__") or callable(x) or isinstance(x, (staticmethod, classmethod, property)):
                continue
            fields.append((k, state(x, depth + 1)))
        return ("class", v.__name__, tuple(sorted(fields)))
    if type(v).__name__ == "module":
        return ("module", v.__name__)
    if callable(v):
        return ("callable", getattr(v, "__qualname__", ""))
    if hasattr(v, "__dict__"):
        return ("object", type(v).__name__, tuple(sorted((k, state(x, depth + 1)) for k, x in vars(v).items())))
    return repr(v)


def snapshot(namespaces):
    out = []
    for ns in namespaces:
        out.append(tuple(sorted((k, state(v)) for k, v in ns.items() if not k.startswith("__"))))
    return tuple(out)


def callee_name(call):
    f = call.func
    if isinstance(f, ast.Attribute):
        return f.attr
    if isinstance(f, ast.Name):
        return f.id
    return None


def main():
    root = os.path.abspath(sys.argv[1])
    sys.path.insert(0, root)
    suite = importlib.import_module("suite")
    with open(os.path.join(root, "main.py")) as fh:
        tree = ast.parse(fh.read())
    ns = {"__name__": "__driver__"}
    result = {}
    for stmt in tree.body:
        code = compile(ast.Module(body=[stmt], type_ignores=[]), "main.py", "exec")
        is_call = isinstance(stmt, ast.Expr) and isinstance(stmt.value, ast.Call)
        if not is_call:
            exec(code, ns)
            continue
        name = callee_name(stmt.value)
        before = snapshot([vars(suite), ns])
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            exec(code, ns)
        after = snapshot([vars(suite), ns])
        result[name] = before != after or out.getvalue() != ""
    json.dump(result, sys.stdout, sort_keys=True)


if __name__ == "__main__":
    main()
