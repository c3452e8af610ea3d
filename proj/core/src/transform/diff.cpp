#include <string_view>

#include "hybridize/transform/edits.h"

namespace hybridize::transform {

namespace {

std::vector<std::string_view> split_lines(const std::string& text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    std::size_t end = nl == std::string::npos ? text.size() : nl + 1;
    lines.emplace_back(text.data() + start, end - start);
    start = end;
  }
  return lines;
}

enum class Op : std::uint8_t { Equal, Delete, Insert };

/// Shortest edit script between `a` and `b` (Myers), after trimming the
/// common prefix and suffix.
std::vector<Op> diff_ops(const std::vector<std::string_view>& a, const std::vector<std::string_view>& b) {
  std::size_t prefix = 0;
  while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
  std::size_t suffix = 0;
  while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
         a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix]) {
    ++suffix;
  }
  const int n = static_cast<int>(a.size() - prefix - suffix);
  const int m = static_cast<int>(b.size() - prefix - suffix);
  auto A = [&](int i) { return a[prefix + static_cast<std::size_t>(i)]; };
  auto B = [&](int j) { return b[prefix + static_cast<std::size_t>(j)]; };

  const int max = n + m;
  const int offset = max + 1;
  std::vector<int> v(static_cast<std::size_t>(2 * max + 3), 0);
  std::vector<std::vector<int>> trace;
  int final_d = 0;
  for (int d = 0; d <= max; ++d) {
    trace.push_back(v);
    bool done = false;
    for (int k = -d; k <= d; k += 2) {
      int x;
      if (k == -d || (k != d && v[static_cast<std::size_t>(offset + k - 1)] < v[static_cast<std::size_t>(offset + k + 1)])) {
        x = v[static_cast<std::size_t>(offset + k + 1)];
      } else {
        x = v[static_cast<std::size_t>(offset + k - 1)] + 1;
      }
      int y = x - k;
      while (x < n && y < m && A(x) == B(y)) {
        ++x;
        ++y;
      }
      v[static_cast<std::size_t>(offset + k)] = x;
      if (x >= n && y >= m) {
        done = true;
        break;
      }
    }
    if (done) {
      final_d = d;
      break;
    }
  }

  std::vector<Op> middle;
  int x = n;
  int y = m;
  for (int d = final_d; d > 0; --d) {
    const std::vector<int>& pv = trace[static_cast<std::size_t>(d)];
    int k = x - y;
    int prev_k;
    if (k == -d || (k != d && pv[static_cast<std::size_t>(offset + k - 1)] < pv[static_cast<std::size_t>(offset + k + 1)])) {
      prev_k = k + 1;
    } else {
      prev_k = k - 1;
    }
    int prev_x = pv[static_cast<std::size_t>(offset + prev_k)];
    int prev_y = prev_x - prev_k;
    while (x > prev_x && y > prev_y) {
      middle.push_back(Op::Equal);
      --x;
      --y;
    }
    middle.push_back(x == prev_x ? Op::Insert : Op::Delete);
    x = prev_x;
    y = prev_y;
  }
  while (x > 0 && y > 0) {
    middle.push_back(Op::Equal);
    --x;
    --y;
  }

  std::vector<Op> ops(prefix, Op::Equal);
  ops.insert(ops.end(), middle.rbegin(), middle.rend());
  ops.insert(ops.end(), suffix, Op::Equal);
  return ops;
}

std::string range(std::size_t start, std::size_t count) {
  // Unified diff convention: an empty range names the line before it.
  if (count == 0) return std::to_string(start == 0 ? 0 : start - 1) + ",0";
  if (count == 1) return std::to_string(start);
  return std::to_string(start) + "," + std::to_string(count);
}

void emit_line(std::string& out, char tag, std::string_view line) {
  out += tag;
  out += line;
  if (line.empty() || line.back() != '\n') {
    out += "\n\\ No newline at end of file\n";
  }
}

}  // namespace

std::string unified_diff(const std::string& path, const std::string& before, const std::string& after, int context) {
  if (before == after) return {};
  std::vector<std::string_view> a = split_lines(before);
  std::vector<std::string_view> b = split_lines(after);
  std::vector<Op> ops = diff_ops(a, b);

  // Positions (in a and b) at the start of each op.
  std::vector<std::size_t> ai(ops.size() + 1);
  std::vector<std::size_t> bi(ops.size() + 1);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    ai[k + 1] = ai[k] + (ops[k] != Op::Insert ? 1 : 0);
    bi[k + 1] = bi[k] + (ops[k] != Op::Delete ? 1 : 0);
  }

  std::string out = "--- a/" + path + "\n+++ b/" + path + "\n";
  const std::size_t ctx = static_cast<std::size_t>(context);
  std::size_t k = 0;
  while (k < ops.size()) {
    while (k < ops.size() && ops[k] == Op::Equal) ++k;
    if (k == ops.size()) break;
    std::size_t begin = k >= ctx ? k - ctx : 0;
    // Extend over changes separated by at most 2*context equal lines.
    std::size_t end = k;
    while (true) {
      while (end < ops.size() && ops[end] != Op::Equal) ++end;
      std::size_t gap = end;
      while (gap < ops.size() && ops[gap] == Op::Equal) ++gap;
      if (gap < ops.size() && gap - end <= 2 * ctx) {
        end = gap;
        continue;
      }
      end = std::min(end + ctx, ops.size());
      break;
    }
    out += "@@ -" + range(ai[begin] + 1, ai[end] - ai[begin]) + " +" + range(bi[begin] + 1, bi[end] - bi[begin]) +
           " @@\n";
    std::size_t j = begin;
    while (j < end) {
      if (ops[j] == Op::Equal) {
        emit_line(out, ' ', a[ai[j]]);
        ++j;
        continue;
      }
      std::size_t run = j;
      while (run < end && ops[run] != Op::Equal) ++run;
      for (std::size_t q = j; q < run; ++q) {
        if (ops[q] == Op::Delete) emit_line(out, '-', a[ai[q]]);
      }
      for (std::size_t q = j; q < run; ++q) {
        if (ops[q] == Op::Insert) emit_line(out, '+', b[bi[q]]);
      }
      j = run;
    }
    k = end;
  }
  return out;
}

std::string render_diff(const EditScript& script, const frontend::ProjectModel& project) {
  std::map<std::string, std::string> rewritten = rewrite(script, project);
  std::string out;
  for (const auto& [path, text] : rewritten) {
    const frontend::SourceUnit* unit = nullptr;
    for (const auto& u : project.units) {
      if (u->path == path) unit = u.get();
    }
    if (unit != nullptr) out += unified_diff(path, unit->text, text);
  }
  return out;
}

}  // namespace hybridize::transform
