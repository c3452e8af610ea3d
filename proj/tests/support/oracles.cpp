#include "oracles.h"

#include <algorithm>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hybridize/frontend/parser.h"
#include "testing.h"

namespace hybridize::testing {

using graphs::DataflowGraph;
using graphs::EdgeKind;
using graphs::NodeKind;
using graphs::ObjectKind;
using inference::StepKind;

const std::vector<TableRow>& precondition_table() {
  // exe, tens, lit, se, rec -> rule, failures, warnings
  static const std::vector<TableRow> rows = {
      {false, false, false, false, false, nullptr, {}, {}},
      {false, false, false, false, true, nullptr, {}, {}},
      {false, false, false, true, false, nullptr, {"F3"}, {}},
      {false, false, false, true, true, nullptr, {"F3"}, {}},
      {false, false, true, false, false, nullptr, {}, {}},
      {false, false, true, false, true, nullptr, {}, {}},
      {false, false, true, true, false, nullptr, {"F3"}, {}},
      {false, false, true, true, true, nullptr, {"F3"}, {}},
      {false, true, false, false, false, "P1", {}, {}},
      {false, true, false, false, true, nullptr, {}, {}},
      {false, true, false, true, false, nullptr, {"F3"}, {}},
      {false, true, false, true, true, nullptr, {"F3"}, {}},
      {false, true, true, false, false, nullptr, {"F2"}, {}},
      {false, true, true, false, true, nullptr, {"F2"}, {}},
      {false, true, true, true, false, nullptr, {"F2", "F3"}, {}},
      {false, true, true, true, true, nullptr, {"F2", "F3"}, {}},
      {true, false, false, false, false, "P2", {}, {}},
      {true, false, false, false, true, "P2", {}, {}},
      {true, false, false, true, false, nullptr, {"F3"}, {"W_hybrid_side_effects"}},
      {true, false, false, true, true, nullptr, {"F3"}, {"W_hybrid_side_effects"}},
      {true, false, true, false, false, "P2", {}, {}},
      {true, false, true, false, true, "P2", {}, {}},
      {true, false, true, true, false, nullptr, {"F3"}, {"W_hybrid_side_effects"}},
      {true, false, true, true, true, nullptr, {"F3"}, {"W_hybrid_side_effects"}},
      {true, true, false, false, false, nullptr, {"F1"}, {}},
      {true, true, false, false, true, nullptr, {"F1"}, {"W_recursive_hybrid_tensor"}},
      {true, true, false, true, false, nullptr, {"F1", "F3"}, {"W_hybrid_side_effects"}},
      {true, true, false, true, true, nullptr, {"F1", "F3"}, {"W_hybrid_side_effects", "W_recursive_hybrid_tensor"}},
      {true, true, true, false, false, "P3", {}, {}},
      {true, true, true, false, true, "P3", {}, {"W_recursive_hybrid_tensor"}},
      {true, true, true, true, false, nullptr, {"F3"}, {"W_hybrid_side_effects"}},
      {true, true, true, true, true, nullptr, {"F3"}, {"W_hybrid_side_effects", "W_recursive_hybrid_tensor"}},
  };
  return rows;
}

std::vector<bool> cyclic_nodes(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  // Warshall over bit rows: reach[i] has bit j iff a path of length >= 1
  // leads from i to j.
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> reach(n, std::vector<std::uint64_t>(words, 0));
  auto test = [&](std::size_t i, std::size_t j) { return (reach[i][j / 64] >> (j % 64)) & 1U; };
  for (auto [a, b] : edges) {
    reach[static_cast<std::size_t>(a)][static_cast<std::size_t>(b) / 64] |= std::uint64_t{1} << (b % 64);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!test(i, k)) continue;
      for (std::size_t w = 0; w < words; ++w) reach[i][w] |= reach[k][w];
    }
  }
  std::vector<bool> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = test(i, i) != 0;
  return out;
}

std::string check_witness(const DataflowGraph& g, const summaries::SummaryDb& db, int param_node,
                          const inference::TensorWitness& w) {
  if (w.path.empty()) return "empty path";
  const inference::WitnessStep& first = w.path.front();
  if (first.kind != StepKind::Alloc) return "path does not start at an allocation";
  const graphs::AbstractObject& gen = g.object(first.object);
  if (gen.kind != ObjectKind::Tensor && gen.kind != ObjectKind::Dataset) return "source is not a tensor or dataset";
  if (db.generator(gen.api) == nullptr) return "source api " + gen.api + " is not a generator";
  if (gen.alloc_node != first.node) return "source not at its allocation node";
  if (!g.pts(first.node).contains(first.object)) return "source object missing from its node";
  for (std::size_t k = 1; k < w.path.size(); ++k) {
    const inference::WitnessStep& prev = w.path[k - 1];
    const inference::WitnessStep& cur = w.path[k];
    std::string where = "step " + std::to_string(k) + ": ";
    if (!g.pts(cur.node).contains(cur.object)) return where + "object not in points-to set";
    switch (cur.kind) {
      case StepKind::Alloc:
        return where + "allocation in the middle of a path";
      case StepKind::Copy:
        if (cur.object != prev.object) return where + "copy changes the object";
        if (!g.has_edge(prev.node, cur.node, EdgeKind::Copy) && !g.has_edge(prev.node, cur.node, EdgeKind::Derived)) {
          return where + "no edge";
        }
        break;
      case StepKind::ElementOf: {
        const graphs::Node& field = g.node(prev.node);
        if (field.kind != NodeKind::Field || field.object != cur.object) return where + "previous is not a field of the container";
        if (g.object(cur.object).kind != ObjectKind::Container) return where + "element of a non-container";
        break;
      }
      case StepKind::Derived: {
        bool edge = cur.object == prev.object && g.has_edge(prev.node, cur.node, EdgeKind::Derived);
        const graphs::AbstractObject& o = g.object(cur.object);
        bool element = o.kind == ObjectKind::DatasetElement && o.receiver == prev.object && o.alloc_node == cur.node;
        if (!edge && !element) return where + "derived step without a derived edge or dataset element";
        break;
      }
    }
  }
  if (w.path.back().node != param_node) return "path does not end at the parameter";
  return {};
}

namespace {

using frontend::Body;
using frontend::Stmt;
using frontend::StmtKind;

void collect_functions(Body& body, const std::string& prefix, std::map<std::string, frontend::FunctionDef*>& out) {
  for (auto& s : body) {
    if (s->kind == StmtKind::FunctionDef) {
      std::string name = prefix + s->function->name;
      out.emplace(name, s->function.get());
      collect_functions(s->function->body, name + ".", out);
    } else if (s->kind == StmtKind::ClassDef) {
      collect_functions(s->klass->body, prefix + s->klass->name + ".", out);
    } else {
      collect_functions(s->body, prefix, out);
      collect_functions(s->orelse, prefix, out);
      collect_functions(s->finalbody, prefix, out);
      for (auto& h : s->handlers) collect_functions(h.body, prefix, out);
    }
  }
}

std::string decorator_name(const frontend::Decorator& d) {
  const frontend::Expr* e = d.expr.get();
  if (e != nullptr && e->kind == frontend::ExprKind::Call) e = e->child(0);
  return e != nullptr ? frontend::dotted_name(*e) : std::string();
}

bool is_function_decorator(const frontend::Decorator& d) {
  std::string name = decorator_name(d);
  return name == "function" || (name.size() > 9 && name.ends_with(".function"));
}

bool is_tf_import(const Stmt& s) {
  return s.kind == StmtKind::Import && s.aliases.size() == 1 && s.aliases[0].name == "tensorflow" &&
         s.aliases[0].asname == "tf";
}

}  // namespace

std::string tree_diff(const std::string& before, const std::string& after, const std::vector<transform::Edit>& edits,
                      const std::string& module) {
  frontend::Module a;
  frontend::Module b;
  try {
    a = frontend::parse_module(before);
    b = frontend::parse_module(after);
  } catch (const std::exception& e) {
    return std::string("parse failure: ") + e.what();
  }
  std::map<std::string, frontend::FunctionDef*> fa;
  std::map<std::string, frontend::FunctionDef*> fb;
  collect_functions(a.body, "", fa);
  collect_functions(b.body, "", fb);
  for (const transform::Edit& e : edits) {
    if (e.kind == transform::EditKind::InsertImport) {
      auto tf_imports = [](const Body& body) {
        return std::count_if(body.begin(), body.end(), [](const auto& s) { return is_tf_import(*s); });
      };
      if (tf_imports(b.body) != tf_imports(a.body) + 1) return "import was not added exactly once";
      auto it = std::find_if(b.body.begin(), b.body.end(), [](const auto& s) { return is_tf_import(*s); });
      b.body.erase(it);
      continue;
    }
    std::string local = e.function.starts_with(module + ".") ? e.function.substr(module.size() + 1) : e.function;
    if (e.kind == transform::EditKind::InsertDecorator) {
      auto it = fb.find(local);
      if (it == fb.end()) return "edited function " + local + " missing after rewrite";
      auto& decorators = it->second->decorators;
      if (decorators.empty() || !is_function_decorator(decorators.front())) return "no decorator added to " + local;
      decorators.erase(decorators.begin());
    } else {
      auto it = fa.find(local);
      if (it == fa.end()) return "edited function " + local + " missing before rewrite";
      auto& decorators = it->second->decorators;
      auto d = std::find_if(decorators.begin(), decorators.end(), [&](const frontend::Decorator& x) {
        return x.at.line == e.line && is_function_decorator(x);
      });
      if (d == decorators.end()) return "removed decorator of " + local + " not found";
      decorators.erase(d);
    }
  }
  if (frontend::dump(a) != frontend::dump(b)) return "trees differ outside the edits";
  return {};
}

std::string reference_diff(const std::string& path, const std::string& before, const std::string& after) {
  TempDir dir;
  write_file(dir.path() / "before", before);
  write_file(dir.path() / "after", after);
  std::string cmd = shell_quote(diff_executable()) + " -u --label " + shell_quote("a/" + path) + " --label " +
                    shell_quote("b/" + path) + " " + shell_quote((dir.path() / "before").string()) + " " +
                    shell_quote((dir.path() / "after").string());
  return run_command(cmd).out;
}

std::map<std::string, bool> dynamic_effects(const std::filesystem::path& suite_dir) {
  std::string cmd = shell_quote(python_executable()) + " " + shell_quote((oracles_dir() / "snapshot_oracle.py").string()) +
                    " " + shell_quote(suite_dir.string());
  CommandResult r = run_command(cmd);
  if (r.status != 0) throw std::runtime_error("snapshot oracle failed: " + r.out);
  std::map<std::string, bool> out;
  nlohmann::json j = nlohmann::json::parse(r.out);
  for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value().get<bool>();
  return out;
}

std::vector<std::pair<std::string, std::string>> synthetic_corpus(std::size_t lines, std::uint32_t seed) {
  std::mt19937 rng(seed);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  std::vector<std::pair<std::string, std::string>> files;
  std::size_t total = 0;
  int module = 0;
  while (total < lines) {
    std::ostringstream body;
    std::ostringstream driver;
    std::string name = "mod" + std::to_string(module);
    body << "\"\"\"Synthetic module " << module << ".\"\"\"\n";
    body << "import tensorflow as tf\n";
    if (module > 0) body << "from mod" << module - 1 << " import entry as previous_entry\n";
    body << "\nCOUNTER = 0\nHISTORY = []\n\n";
    for (int k = 0; k < 24; ++k) {
      std::string id = std::to_string(k);
      switch (pick(7)) {
        case 0:
          body << "\ndef scale_" << id << "(x, y):\n    z = tf.add(x, y)\n    w = z * 2\n    return tf.reduce_sum(w)\n\n";
          driver << "    scale_" << id << "(tf.ones([2, 2]), tf.zeros([2, 2]))\n";
          break;
        case 1:
          body << "\ndef log_" << id << "(x):\n    print(\"value\", x)\n    return x\n\n";
          driver << "    log_" << id << "(" << pick(100) << ")\n";
          break;
        case 2:
          body << "\nclass Net" << id << "(tf.keras.Model):\n    def __init__(self):\n        super().__init__()\n"
               << "        self.dense = tf.keras.layers.Dense(" << 1 + pick(16) << ")\n\n"
               << "    def call(self, inputs):\n        h = self.dense(inputs)\n        return tf.nn.relu(h)\n\n";
          driver << "    net" << id << " = Net" << id << "()\n    net" << id << "(tf.random.uniform([4, 3]))\n";
          break;
        case 3:
          body << "\n@tf.function\ndef loop_" << id << "(steps):\n    total = tf.constant(0)\n"
               << "    for i in tf.range(steps):\n        total += i\n    return total\n\n";
          driver << "    loop_" << id << "(" << 1 + pick(9) << ")\n    loop_" << id << "(tf.constant(3))\n";
          break;
        case 4:
          body << "\ndef bump_" << id << "():\n    global COUNTER\n    COUNTER += 1\n    HISTORY.append(COUNTER)\n"
               << "    return COUNTER\n\n";
          driver << "    bump_" << id << "()\n";
          break;
        case 5:
          body << "\ndef batches_" << id << "(data):\n    ds = tf.data.Dataset.from_tensor_slices(data).batch(2)\n"
               << "    out = []\n    for element in ds:\n        out.append(consume_" << id << "(element))\n"
               << "    return out\n\n\ndef consume_" << id << "(element):\n    return tf.reduce_mean(element)\n\n";
          driver << "    batches_" << id << "(tf.ones([8, 3]))\n";
          break;
        default:
          body << "\n@tf.function\ndef helper_" << id << "(a, b=" << pick(5) << "):\n    c = [a, b]\n"
               << "    if len(c) > 1:\n        return c[0]\n    return a\n\n";
          driver << "    helper_" << id << "(tf.constant(" << pick(10) << ".0))\n";
          break;
      }
    }
    body << "\ndef entry():\n" << driver.str();
    if (module > 0) body << "    previous_entry()\n";
    body << "    return 0\n";
    body << "\n\nif __name__ == \"__main__\":\n    entry()\n";
    std::string text = body.str();
    total += static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
    files.emplace_back(name + ".py", std::move(text));
    ++module;
  }
  return files;
}

}  // namespace hybridize::testing
