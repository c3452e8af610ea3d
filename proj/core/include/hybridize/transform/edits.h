#pragma once

#include <map>
#include <string>
#include <vector>

#include "hybridize/refactor/preconditions.h"

namespace hybridize::transform {

enum class EditKind : std::uint8_t { InsertDecorator, RemoveDecorator, InsertImport };

const char* to_string(EditKind kind);

/// `length` bytes at `offset` are replaced by `text`; insertions have
/// length 0, removals have empty text.
struct Edit {
  std::string file;
  EditKind kind = EditKind::InsertDecorator;
  std::uint32_t line = 0;  // 1-based line of the anchor in the original file
  std::uint32_t column = 0;
  std::size_t offset = 0;
  std::size_t length = 0;
  std::string text;
  std::string function;
};

struct EditFailure {
  std::string function;
  std::string file;
  std::string message;
};

struct EditScript {
  std::vector<Edit> edits;  // by file, then descending offset
  std::vector<EditFailure> failures;

  bool empty() const { return edits.empty(); }
};

/// End-of-line convention of `text` ("\r\n" when it dominates, else "\n").
std::string detect_eol(const std::string& text);

/// Name under which the file can spell `tensorflow.function`, or empty when
/// an import has to be added.
std::string hybridization_alias(const frontend::SourceUnit& unit);

/// Offset where `import tensorflow as tf` goes: after a module docstring and
/// `from __future__` imports.
std::size_t import_offset(const frontend::SourceUnit& unit);

EditScript apply_plan(const refactor::RefactoringPlan& plan, const frontend::Program& program);

/// Applies the edits of one file to its original text.
std::string apply_edits(const std::string& text, std::vector<Edit> edits);

/// Rewritten text per edited file.
std::map<std::string, std::string> rewrite(const EditScript& script, const frontend::ProjectModel& project);

/// Unified diff (3 lines of context) between two versions of `path`, with
/// `a/` and `b/` prefixed headers. Empty when the texts are equal.
std::string unified_diff(const std::string& path, const std::string& before, const std::string& after,
                         int context = 3);

std::string render_diff(const EditScript& script, const frontend::ProjectModel& project);

}  // namespace hybridize::transform
