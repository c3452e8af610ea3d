#include "hybridize/transform/edits.h"

#include <algorithm>
#include <tuple>

namespace hybridize::transform {

using frontend::StmtKind;

const char* to_string(EditKind kind) {
  switch (kind) {
    case EditKind::InsertDecorator: return "insert_decorator";
    case EditKind::RemoveDecorator: return "remove_decorator";
    case EditKind::InsertImport: return "insert_import";
  }
  return "?";
}

std::string detect_eol(const std::string& text) {
  std::size_t crlf = 0;
  std::size_t lf = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\n') continue;
    if (i > 0 && text[i - 1] == '\r') {
      ++crlf;
    } else {
      ++lf;
    }
  }
  return crlf > lf ? "\r\n" : "\n";
}

std::string hybridization_alias(const frontend::SourceUnit& unit) {
  if (!unit.parsed()) return {};
  for (const frontend::StmtPtr& s : unit.tree->body) {
    if (s->kind != StmtKind::Import) continue;
    for (const frontend::Alias& a : s->aliases) {
      if (a.asname.empty()) {
        // `import tensorflow` or `import tensorflow.x` binds `tensorflow`.
        if (a.name == "tensorflow" || a.name.rfind("tensorflow.", 0) == 0) return "tensorflow";
      } else if (refactor::is_hybridization_decorator(a.name + ".function")) {
        return a.asname;
      }
    }
  }
  return {};
}

namespace {

std::size_t line_start(const std::string& text, std::size_t offset) {
  while (offset > 0 && text[offset - 1] != '\n') --offset;
  return offset;
}

bool is_docstring(const frontend::Stmt& s) {
  return s.kind == StmtKind::Expr && s.value && s.value->kind == frontend::ExprKind::Constant &&
         s.value->literal == frontend::LiteralKind::String;
}

bool is_future_import(const frontend::Stmt& s) {
  return s.kind == StmtKind::ImportFrom && s.level == 0 && s.module == "__future__";
}

std::size_t after_line(const std::string& text, std::size_t offset) {
  std::size_t nl = text.find('\n', offset);
  return nl == std::string::npos ? text.size() : nl + 1;
}

}  // namespace

std::size_t import_offset(const frontend::SourceUnit& unit) {
  const std::string& text = unit.text;
  const auto& body = unit.tree->body;
  std::size_t k = 0;
  std::size_t after = 0;
  if (k < body.size() && is_docstring(*body[k])) {
    after = after_line(text, body[k]->range.end.offset == 0 ? 0 : body[k]->range.end.offset - 1);
    ++k;
  }
  while (k < body.size() && is_future_import(*body[k])) {
    after = after_line(text, body[k]->range.end.offset == 0 ? 0 : body[k]->range.end.offset - 1);
    ++k;
  }
  if (k < body.size()) return std::max(after, line_start(text, body[k]->range.begin.offset));
  return after;
}

EditScript apply_plan(const refactor::RefactoringPlan& plan, const frontend::Program& program) {
  EditScript script;
  std::map<std::string, std::vector<Edit>> by_file;
  for (const auto& [path, indices] : plan.edits_by_file()) {
    const frontend::SourceUnit* unit = program.project->find_module(frontend::module_name_for(path));
    std::vector<Edit>& edits = by_file[path];
    bool need_import = false;
    std::string alias;
    if (unit != nullptr && unit->parsed()) alias = hybridization_alias(*unit);
    for (std::size_t idx : indices) {
      const refactor::FunctionAnalysis& a = plan.functions[idx];
      const frontend::FunctionUnit& fn = program.functions[static_cast<std::size_t>(a.function)];
      if (unit == nullptr || fn.unit != unit || fn.def == nullptr) {
        script.failures.push_back({a.fq_name, path, "function no longer present in the project"});
        continue;
      }
      const std::string& text = unit->text;
      std::string eol = detect_eol(text);
      const frontend::FunctionDef& def = *fn.def;
      if (a.verdict.action == refactor::Action::Hybridize) {
        std::size_t anchor = def.decorators.empty() ? def.line_begin.offset : def.decorators.front().line_begin.offset;
        std::uint32_t line = def.decorators.empty() ? def.keyword.line : def.decorators.front().at.line;
        std::size_t indent_end = anchor;
        while (indent_end < text.size() && (text[indent_end] == ' ' || text[indent_end] == '\t')) ++indent_end;
        std::string indent = text.substr(anchor, indent_end - anchor);
        if (alias.empty()) need_import = true;
        std::string spelled = alias.empty() ? "tf" : alias;
        edits.push_back(Edit{path, EditKind::InsertDecorator, line, static_cast<std::uint32_t>(indent.size()), anchor, 0,
                             indent + "@" + spelled + ".function" + eol, a.fq_name});
      } else {
        int k = a.mode.decorator;
        if (k < 0 || static_cast<std::size_t>(k) >= def.decorators.size()) {
          script.failures.push_back({a.fq_name, path, "hybridization decorator not found"});
          continue;
        }
        const frontend::Decorator& d = def.decorators[static_cast<std::size_t>(k)];
        std::size_t begin = d.line_begin.offset;
        std::size_t end = d.line_end.offset;
        if (end <= begin || end > text.size()) {
          script.failures.push_back({a.fq_name, path, "decorator span out of range"});
          continue;
        }
        edits.push_back(Edit{path, EditKind::RemoveDecorator, d.at.line, d.at.column, begin, end - begin, {},
                             a.fq_name});
      }
    }
    if (need_import) {
      std::size_t offset = import_offset(*unit);
      std::string eol = detect_eol(unit->text);
      std::string text = "import tensorflow as tf" + eol;
      if (offset == unit->text.size() && offset > 0 && unit->text.back() != '\n') text = eol + text;
      std::uint32_t line = 1 + static_cast<std::uint32_t>(std::count(unit->text.begin(),
                                                                     unit->text.begin() + static_cast<long>(offset), '\n'));
      edits.push_back(Edit{path, EditKind::InsertImport, line, 0, offset, 0, text, {}});
    }
  }
  for (auto& [path, edits] : by_file) {
    // Descending offsets; at equal offsets the import is applied last so it
    // ends up above an inserted decorator.
    std::stable_sort(edits.begin(), edits.end(), [](const Edit& x, const Edit& y) {
      bool xi = x.kind == EditKind::InsertImport;
      bool yi = y.kind == EditKind::InsertImport;
      return std::tie(y.offset, xi) < std::tie(x.offset, yi);
    });
    script.edits.insert(script.edits.end(), edits.begin(), edits.end());
  }
  return script;
}

std::string apply_edits(const std::string& text, std::vector<Edit> edits) {
  std::stable_sort(edits.begin(), edits.end(), [](const Edit& x, const Edit& y) {
    bool xi = x.kind == EditKind::InsertImport;
    bool yi = y.kind == EditKind::InsertImport;
    return std::tie(y.offset, xi) < std::tie(x.offset, yi);
  });
  std::string out = text;
  for (const Edit& e : edits) out.replace(e.offset, e.length, e.text);
  return out;
}

std::map<std::string, std::string> rewrite(const EditScript& script, const frontend::ProjectModel& project) {
  std::map<std::string, std::vector<Edit>> by_file;
  for (const Edit& e : script.edits) by_file[e.file].push_back(e);
  std::map<std::string, std::string> out;
  for (auto& [path, edits] : by_file) {
    for (const auto& u : project.units) {
      if (u->path == path) out[path] = apply_edits(u->text, edits);
    }
  }
  return out;
}

}  // namespace hybridize::transform
