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

// Review sessions over a unit ledger, persisted as an append-only event log.
//
// Log format (JSON Lines, one event per line):
//   {"event": "session_created", "session_id": "s1", "lang": "ar",
//    "reviewer_id": "r1", "keys": [{"record_id", "turn_index", "lang"}, ...]}
//   {"event": "submission", "session_id": "s1", "cursor": 0, "key": {...},
//    "corrected_text": "...", "issue_tags": ["Gender"], "note": "..."}
//
// State is rebuilt by replaying the log on construction. Every accepted
// event is fsync'ed before the call returns.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "palo_forge/json.h"
#include "palo_forge/language.h"
#include "palo_forge/translation.h"

namespace palo_forge {

struct ReviewSession {
  std::string session_id;
  Language lang = Language::kEnglish;
  std::string reviewer_id;
  std::vector<UnitKey> assigned;
  std::size_t cursor = 0;

  bool done() const { return cursor >= assigned.size(); }
};

struct CorrectionSubmission {
  UnitKey key;
  std::string corrected_text;
  std::set<IssueTag> issue_tags;
  std::optional<std::string> note;
};

struct SessionProgress {
  std::size_t done = 0;
  std::size_t total = 0;
};

struct NextUnit {
  bool done = false;
  SessionProgress progress;
  /// Absent when done.
  std::optional<TranslationUnit> unit;
};

struct ProgressReport {
  std::int64_t reviewed = 0;
  /// Assigned units whose machine translation carried validation flags.
  std::int64_t flagged = 0;
  /// Assigned but not yet reviewed.
  std::int64_t remaining = 0;
  std::map<IssueTag, std::int64_t> tag_histogram;
};

Json session_to_json(ReviewSession const& session);
Json next_unit_to_json(NextUnit const& next);
Json progress_to_json(ProgressReport const& report);
CorrectionSubmission submission_from_json(Json const& j);

class ReviewStore {
 public:
  /// Opens (creating if needed) the event log and replays it over `ledger`.
  /// Throws ValidationError if the log contradicts the ledger.
  ReviewStore(std::vector<TranslationUnit> ledger,
              std::filesystem::path log_path);
  ~ReviewStore();

  ReviewStore(ReviewStore const&) = delete;
  ReviewStore& operator=(ReviewStore const&) = delete;

  /// Throws NotFoundError for keys missing from the ledger, UsageError for
  /// duplicate keys or keys of another language, and ConflictError for keys
  /// already assigned to another session.
  ReviewSession create_session(Language lang, std::string const& reviewer_id,
                               std::span<UnitKey const> sample);

  /// Throws NotFoundError for unknown sessions.
  NextUnit next_unit(std::string const& session_id) const;

  /// Throws ConflictError unless the submission targets the unit at the
  /// cursor, and ValidationError for an empty correction of a non-empty
  /// source or a changed placeholder count.
  SessionProgress submit_correction(std::string const& session_id,
                                    CorrectionSubmission const& submission);

  ProgressReport progress_report(Language lang) const;

  std::optional<ReviewSession> session(std::string const& session_id) const;
  std::vector<ReviewSession> sessions() const;

  /// The ledger with all submissions applied, in original order.
  std::vector<TranslationUnit> units() const;

 private:
  void check_session(ReviewSession const& s) const;
  void commit_session(ReviewSession s);
  std::size_t check_submission(std::string const& session_id,
                               CorrectionSubmission const& sub) const;
  void commit_submission(std::string const& session_id, std::size_t unit,
                         CorrectionSubmission const& sub);
  void replay(std::string_view log);
  void append(Json const& event);

  std::filesystem::path log_path_;
  int fd_ = -1;
  mutable std::shared_mutex mu_;
  std::vector<TranslationUnit> ledger_;
  std::map<UnitKey, std::size_t> index_;
  std::map<UnitKey, std::string> owner_;
  std::map<std::string, ReviewSession> sessions_;
  std::vector<std::string> order_;
  std::int64_t next_session_ = 1;
};

}  // namespace palo_forge
