#pragma once

#include <string>
#include <vector>

namespace foliate {

enum class Status { PassExact, PassNumeric, Fail, Undecided };

const char* status_name(Status s);
bool is_pass(Status s);
// Combines two statuses: any failure wins, then undecided, then numeric.
Status worst(Status a, Status b);

struct ReportLine {
  enum class Kind { Check, Form };
  Kind kind = Kind::Check;
  std::string name;
  Status status = Status::PassExact;
  std::string text;  // detail of a check, or the printed form
};

struct Report {
  std::vector<ReportLine> lines;

  void check(const std::string& name, Status status, const std::string& detail = "");
  void check(const std::string& name, bool ok, const std::string& detail = "");
  void form(const std::string& name, const std::string& text);
  void append(const Report& other, const std::string& prefix = "");

  bool has_failure() const;
  bool all_passed() const;  // no failure and no undecided entry
  Status overall() const;
  const ReportLine* find(const std::string& name) const;
};

}  // namespace foliate
