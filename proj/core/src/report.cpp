#include "foliate/report.hpp"

namespace foliate {

const char* status_name(Status s) {
  switch (s) {
    case Status::PassExact: return "PASS-EXACT";
    case Status::PassNumeric: return "PASS-NUMERIC";
    case Status::Fail: return "FAIL";
    case Status::Undecided: return "UNDECIDED";
  }
  return "?";
}

bool is_pass(Status s) { return s == Status::PassExact || s == Status::PassNumeric; }

Status worst(Status a, Status b) {
  auto rank = [](Status s) {
    switch (s) {
      case Status::PassExact: return 0;
      case Status::PassNumeric: return 1;
      case Status::Undecided: return 2;
      case Status::Fail: return 3;
    }
    return 3;
  };
  return rank(a) >= rank(b) ? a : b;
}

void Report::check(const std::string& name, Status status, const std::string& detail) {
  lines.push_back({ReportLine::Kind::Check, name, status, detail});
}

void Report::check(const std::string& name, bool ok, const std::string& detail) {
  check(name, ok ? Status::PassExact : Status::Fail, detail);
}

void Report::form(const std::string& name, const std::string& text) {
  lines.push_back({ReportLine::Kind::Form, name, Status::PassExact, text});
}

void Report::append(const Report& other, const std::string& prefix) {
  for (auto line : other.lines) {
    line.name = prefix + line.name;
    lines.push_back(line);
  }
}

bool Report::has_failure() const {
  for (const auto& l : lines) {
    if (l.kind == ReportLine::Kind::Check && l.status == Status::Fail) return true;
  }
  return false;
}

bool Report::all_passed() const {
  for (const auto& l : lines) {
    if (l.kind == ReportLine::Kind::Check && !is_pass(l.status)) return false;
  }
  return true;
}

Status Report::overall() const {
  Status s = Status::PassExact;
  for (const auto& l : lines) {
    if (l.kind == ReportLine::Kind::Check) s = worst(s, l.status);
  }
  return s;
}

const ReportLine* Report::find(const std::string& name) const {
  for (const auto& l : lines) {
    if (l.name == name) return &l;
  }
  return nullptr;
}

}  // namespace foliate
