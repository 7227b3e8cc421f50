// Copyright 2026 The palo-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "palo_forge/review_store.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <mutex>

#include "palo_forge/dataset.h"
#include "palo_forge/errors.h"
#include "palo_forge/io.h"

namespace palo_forge {
namespace {

Json tags_to_json(std::set<IssueTag> const& tags) {
  auto out = Json::array();
  for (auto t : tags) out.push_back(issue_tag_name(t));
  return out;
}

std::set<IssueTag> tags_from_json(Json const& j) {
  std::set<IssueTag> tags;
  for (auto const& t : j) {
    auto name = t.get<std::string>();
    auto tag = parse_issue_tag(name);
    if (!tag) throw ValidationError("", "unknown issue tag '" + name + "'");
    tags.insert(*tag);
  }
  return tags;
}

Json submission_event(std::string const& session_id, std::size_t cursor,
                      CorrectionSubmission const& sub) {
  Json e;
  e["event"] = "submission";
  e["session_id"] = session_id;
  e["cursor"] = cursor;
  e["key"] = key_to_json(sub.key);
  e["corrected_text"] = sub.corrected_text;
  e["issue_tags"] = tags_to_json(sub.issue_tags);
  if (sub.note) e["note"] = *sub.note;
  return e;
}

}  // namespace

Json session_to_json(ReviewSession const& s) {
  Json j;
  j["session_id"] = s.session_id;
  j["lang"] = code_of(s.lang);
  j["reviewer_id"] = s.reviewer_id;
  auto keys = Json::array();
  for (auto const& k : s.assigned) keys.push_back(key_to_json(k));
  j["assigned"] = std::move(keys);
  j["cursor"] = s.cursor;
  j["done"] = s.done();
  return j;
}

Json next_unit_to_json(NextUnit const& next) {
  Json j;
  j["done"] = next.done;
  j["progress"] = Json{{"done", next.progress.done}, {"total", next.progress.total}};
  if (next.unit) {
    auto const& u = *next.unit;
    Json unit;
    unit["key"] = key_to_json(u.key());
    unit["source_text"] = u.source_text;
    unit["machine_text"] = u.machine_text;
    unit["status"] = status_name(u.status);
    unit["report"] = report_to_json(u.report);
    unit["right_to_left"] = tag_of(u.lang).right_to_left;
    j["unit"] = std::move(unit);
  }
  return j;
}

Json progress_to_json(ProgressReport const& r) {
  Json j;
  j["reviewed"] = r.reviewed;
  j["flagged"] = r.flagged;
  j["remaining"] = r.remaining;
  auto hist = Json::object();
  for (auto tag : all_issue_tags()) {
    auto it = r.tag_histogram.find(tag);
    hist[std::string(issue_tag_name(tag))] =
        it == r.tag_histogram.end() ? 0 : it->second;
  }
  j["tag_histogram"] = std::move(hist);
  return j;
}

CorrectionSubmission submission_from_json(Json const& j) {
  try {
    CorrectionSubmission sub;
    sub.key = key_from_json(j.at("key"));
    sub.corrected_text = j.at("corrected_text").get<std::string>();
    if (j.contains("issue_tags")) sub.issue_tags = tags_from_json(j.at("issue_tags"));
    if (j.contains("note") && !j.at("note").is_null()) {
      sub.note = j.at("note").get<std::string>();
    }
    return sub;
  } catch (Json::exception const& e) {
    throw ValidationError("", "malformed submission",
                          std::string("malformed submission: ") + e.what());
  }
}

ReviewStore::ReviewStore(std::vector<TranslationUnit> ledger,
                         std::filesystem::path log_path)
    : log_path_(std::move(log_path)), ledger_(std::move(ledger)) {
  for (std::size_t i = 0; i < ledger_.size(); ++i) {
    if (!index_.emplace(ledger_[i].key(), i).second) {
      throw ValidationError(ledger_[i].key().to_string(),
                            "duplicate unit in ledger");
    }
  }
  if (std::filesystem::exists(log_path_)) replay(read_file(log_path_));
  fd_ = ::open(log_path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error("cannot open review log '" + log_path_.string() +
                "': " + std::strerror(errno));
  }
}

ReviewStore::~ReviewStore() {
  if (fd_ >= 0) ::close(fd_);
}

void ReviewStore::replay(std::string_view log) {
  // A crash mid-append leaves a partial last line; drop it.
  if (!log.empty() && log.back() != '\n') {
    auto nl = log.rfind('\n');
    log = nl == std::string_view::npos ? std::string_view() : log.substr(0, nl + 1);
    std::filesystem::resize_file(log_path_, log.size());
  }
  for_each_line(log, [&](std::string_view line, std::size_t n) {
    auto e = parse_json(line, "review log line " + std::to_string(n));
    try {
      auto kind = e.at("event").get<std::string>();
      if (kind == "session_created") {
        ReviewSession s;
        s.session_id = e.at("session_id").get<std::string>();
        s.lang = language_from_code(e.at("lang").get<std::string>());
        s.reviewer_id = e.at("reviewer_id").get<std::string>();
        for (auto const& k : e.at("keys")) s.assigned.push_back(key_from_json(k));
        check_session(s);
        commit_session(std::move(s));
      } else if (kind == "submission") {
        auto id = e.at("session_id").get<std::string>();
        auto sub = submission_from_json(e);
        auto unit = check_submission(id, sub);
        commit_submission(id, unit, sub);
      } else {
        throw ValidationError("", "unknown event '" + kind + "'");
      }
    } catch (Json::exception const& ex) {
      throw ValidationError("", "malformed review log",
                            "review log line " + std::to_string(n) + ": " +
                                ex.what());
    }
  });
}

void ReviewStore::append(Json const& event) {
  auto line = to_jsonl_line(event);
  std::string_view rest = line;
  while (!rest.empty()) {
    auto n = ::write(fd_, rest.data(), rest.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error("review log write failed: " + std::string(std::strerror(errno)));
    }
    rest.remove_prefix(static_cast<std::size_t>(n));
  }
  if (::fsync(fd_) != 0) {
    throw Error("review log fsync failed: " + std::string(std::strerror(errno)));
  }
}

void ReviewStore::check_session(ReviewSession const& s) const {
  std::set<UnitKey> seen;
  for (auto const& k : s.assigned) {
    if (k.lang != s.lang) {
      throw UsageError("unit " + k.to_string() + " is not in session language " +
                       std::string(code_of(s.lang)));
    }
    if (!seen.insert(k).second) {
      throw UsageError("duplicate unit " + k.to_string() + " in sample");
    }
    if (!index_.count(k)) {
      throw NotFoundError("unit " + k.to_string() + " is not in the ledger");
    }
    if (auto it = owner_.find(k); it != owner_.end()) {
      throw ConflictError("unit " + k.to_string() +
                          " is already assigned to session " + it->second);
    }
  }
}

void ReviewStore::commit_session(ReviewSession s) {
  for (auto const& k : s.assigned) owner_.emplace(k, s.session_id);
  if (s.session_id.size() > 1 && s.session_id[0] == 's') {
    try {
      next_session_ = std::max<std::int64_t>(next_session_,
                                             std::stoll(s.session_id.substr(1)) + 1);
    } catch (std::exception const&) {
    }
  }
  order_.push_back(s.session_id);
  auto id = s.session_id;
  sessions_.emplace(std::move(id), std::move(s));
}

ReviewSession ReviewStore::create_session(Language lang,
                                          std::string const& reviewer_id,
                                          std::span<UnitKey const> sample) {
  std::unique_lock lock(mu_);
  ReviewSession s;
  s.session_id = "s" + std::to_string(next_session_);
  s.lang = lang;
  s.reviewer_id = reviewer_id;
  s.assigned.assign(sample.begin(), sample.end());
  if (reviewer_id.empty()) throw UsageError("reviewer_id is required");
  check_session(s);

  Json e;
  e["event"] = "session_created";
  e["session_id"] = s.session_id;
  e["lang"] = code_of(lang);
  e["reviewer_id"] = reviewer_id;
  auto keys = Json::array();
  for (auto const& k : s.assigned) keys.push_back(key_to_json(k));
  e["keys"] = std::move(keys);
  append(e);

  commit_session(s);
  return s;
}

NextUnit ReviewStore::next_unit(std::string const& session_id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw NotFoundError("unknown session '" + session_id + "'");
  }
  auto const& s = it->second;
  NextUnit next;
  next.progress = {s.cursor, s.assigned.size()};
  next.done = s.done();
  if (!next.done) next.unit = ledger_[index_.at(s.assigned[s.cursor])];
  return next;
}

std::size_t ReviewStore::check_submission(
    std::string const& session_id, CorrectionSubmission const& sub) const {
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw NotFoundError("unknown session '" + session_id + "'");
  }
  auto const& s = it->second;
  if (s.done()) {
    throw ConflictError("session " + session_id + " is already complete");
  }
  if (!(s.assigned[s.cursor] == sub.key)) {
    throw ConflictError("submission for " + sub.key.to_string() +
                        " does not match the current unit " +
                        s.assigned[s.cursor].to_string());
  }
  auto unit = index_.at(sub.key);
  auto const& u = ledger_[unit];
  if (u.reviewed()) {
    throw ConflictError("unit " + sub.key.to_string() + " is already reviewed");
  }
  auto id = sub.key.to_string();
  if (sub.corrected_text.empty() && !u.source_text.empty()) {
    throw ValidationError(id, "empty correction for non-empty source");
  }
  if (count_placeholders(sub.corrected_text) != count_placeholders(u.source_text)) {
    throw ValidationError(id, "correction changes placeholder count");
  }
  return unit;
}

void ReviewStore::commit_submission(std::string const& session_id,
                                    std::size_t unit,
                                    CorrectionSubmission const& sub) {
  auto& u = ledger_[unit];
  u.corrected_text = sub.corrected_text;
  u.issue_tags = sub.issue_tags;
  u.note = sub.note;
  u.status = UnitStatus::kReviewed;
  ++sessions_.at(session_id).cursor;
}

SessionProgress ReviewStore::submit_correction(
    std::string const& session_id, CorrectionSubmission const& submission) {
  std::unique_lock lock(mu_);
  auto unit = check_submission(session_id, submission);
  auto const& s = sessions_.at(session_id);
  append(submission_event(session_id, s.cursor, submission));
  commit_submission(session_id, unit, submission);
  return {s.cursor, s.assigned.size()};
}

ProgressReport ReviewStore::progress_report(Language lang) const {
  std::shared_lock lock(mu_);
  ProgressReport r;
  for (auto const& [key, session_id] : owner_) {
    if (key.lang != lang) continue;
    auto const& u = ledger_[index_.at(key)];
    if (!u.report.clean()) ++r.flagged;
    if (u.status == UnitStatus::kReviewed) {
      ++r.reviewed;
      for (auto t : u.issue_tags) ++r.tag_histogram[t];
    } else {
      ++r.remaining;
    }
  }
  return r;
}

std::optional<ReviewSession> ReviewStore::session(
    std::string const& session_id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) return std::nullopt;
  return it->second;
}

std::vector<ReviewSession> ReviewStore::sessions() const {
  std::shared_lock lock(mu_);
  std::vector<ReviewSession> out;
  for (auto const& id : order_) out.push_back(sessions_.at(id));
  return out;
}

std::vector<TranslationUnit> ReviewStore::units() const {
  std::shared_lock lock(mu_);
  return ledger_;
}

}  // namespace palo_forge
