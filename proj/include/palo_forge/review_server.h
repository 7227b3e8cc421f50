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

// HTTP/JSON front end for ReviewStore.
//
//   POST /sessions              {"lang", "reviewer_id", "keys": [...]}  -> 201
//   GET  /sessions/{id}         session state
//   GET  /sessions/{id}/next    {"done", "progress", "unit"?}
//   POST /sessions/{id}/submit  {"key", "corrected_text", "issue_tags", "note"?}
//   GET  /progress/{lang}       {"reviewed", "flagged", "remaining", ...}
//   GET  /healthz               {"status": "ok"}
//   GET  /ui/...                static review UI bundle, when configured
//
// Errors are {"error": <kind>, "message": ...} with 400 (bad request),
// 404 (unknown session/unit), 409 (conflict) or 422 (validation).

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "palo_forge/review_store.h"

namespace palo_forge {

struct ListenAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

/// Parses "host:port", ":port" or "port". Port 0 picks a free port.
ListenAddress parse_listen_address(std::string_view text);

class ReviewServer {
 public:
  explicit ReviewServer(ReviewStore& store,
                        std::optional<std::filesystem::path> ui_dir = {});
  ~ReviewServer();

  ReviewServer(ReviewServer const&) = delete;
  ReviewServer& operator=(ReviewServer const&) = delete;

  /// Binds the socket and returns the bound port.
  int bind(ListenAddress const& address);

  /// Serves until stop(). Requires bind().
  void serve();
  /// serve() on a background thread.
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
};

}  // namespace palo_forge
