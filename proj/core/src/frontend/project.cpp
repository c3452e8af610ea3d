#include "hybridize/frontend/project.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "hybridize/frontend/parser.h"

namespace hybridize::frontend {

namespace fs = std::filesystem;

std::string SourceUnit::package() const {
  if (is_package_init) return module;
  auto dot = module.rfind('.');
  return dot == std::string::npos ? std::string() : module.substr(0, dot);
}

const SourceUnit* ProjectModel::find_module(std::string_view module) const {
  auto it = by_module_.find(module);
  return it == by_module_.end() ? nullptr : it->second;
}

std::string module_name_for(std::string_view relative_path) {
  std::string path(relative_path);
  if (path.size() >= 3 && path.compare(path.size() - 3, 3, ".py") == 0) path.resize(path.size() - 3);
  std::string module;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  if (parts.size() > 1 && parts.back() == "__init__") parts.pop_back();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) module += '.';
    module += parts[i];
  }
  return module;
}

std::string resolve_relative(const SourceUnit& unit, int level, std::string_view module) {
  if (level == 0) return std::string(module);
  std::string base = unit.package();
  for (int i = 1; i < level; ++i) {
    if (base.empty()) return {};
    auto dot = base.rfind('.');
    base = dot == std::string::npos ? std::string() : base.substr(0, dot);
  }
  if (module.empty()) return base;
  if (base.empty()) return std::string(module);
  return base + "." + std::string(module);
}

ProjectModel make_project(fs::path root, std::vector<std::pair<std::string, std::string>> files) {
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  ProjectModel project;
  project.root = std::move(root);
  for (auto& [path, text] : files) {
    auto unit = std::make_unique<SourceUnit>();
    unit->path = path;
    unit->module = module_name_for(path);
    std::string_view base = path;
    if (auto slash = base.rfind('/'); slash != std::string_view::npos) base = base.substr(slash + 1);
    unit->is_package_init = base == "__init__.py";
    unit->text = std::move(text);
    try {
      unit->tree = std::make_unique<Module>(parse_module(unit->text));
    } catch (const SyntaxError& e) {
      unit->failure = ParseFailure{e.what(), e.line(), e.column(), e.is_python2()};
    }
    // Every directory holding Python files acts as a (possibly namespace)
    // package.
    std::string dir = unit->is_package_init ? unit->module : unit->package();
    while (!dir.empty()) {
      project.packages.insert(dir);
      auto dot = dir.rfind('.');
      dir = dot == std::string::npos ? std::string() : dir.substr(0, dot);
    }
    project.units.push_back(std::move(unit));
  }
  for (const auto& unit : project.units) {
    // A package's __init__ wins over a same-named module file.
    auto [it, inserted] = project.by_module_.emplace(unit->module, unit.get());
    if (!inserted && unit->is_package_init) it->second = unit.get();
  }
  return project;
}

ProjectModel parse_project(const fs::path& root) {
  std::error_code ec;
  if (!fs::exists(root, ec)) throw ConfigError("root does not exist: " + root.string());
  if (!fs::is_directory(root, ec)) throw ConfigError("root is not a directory: " + root.string());

  std::vector<std::pair<std::string, std::string>> files;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw ConfigError("cannot read root " + root.string() + ": " + ec.message());
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) throw ConfigError("cannot read root " + root.string() + ": " + ec.message());
    const fs::path& p = it->path();
    std::string name = p.filename().string();
    if (it->is_directory(ec)) {
      if ((!name.empty() && name[0] == '.') || name == "__pycache__") it.disable_recursion_pending();
      continue;
    }
    if (p.extension() != ".py" || !it->is_regular_file(ec)) continue;
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    files.emplace_back(fs::relative(p, root).generic_string(), buf.str());
  }
  return make_project(root, std::move(files));
}

}  // namespace hybridize::frontend
