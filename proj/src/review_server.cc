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

#include "palo_forge/review_server.h"

#include <charconv>
#include <functional>

#include <httplib.h>

#include "palo_forge/errors.h"
#include "palo_forge/json.h"

namespace palo_forge {
namespace {

constexpr char kJson[] = "application/json; charset=utf-8";

void reply(httplib::Response& res, int status, Json const& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void reply_error(httplib::Response& res, int status, std::string_view kind,
                 std::string const& message) {
  reply(res, status, Json{{"error", kind}, {"message", message}});
}

using Handler = std::function<void(httplib::Request const&, httplib::Response&)>;

// Maps library exceptions onto HTTP statuses.
httplib::Server::Handler guarded(Handler h) {
  return [h = std::move(h)](httplib::Request const& req, httplib::Response& res) {
    try {
      h(req, res);
    } catch (ParseError const& e) {
      reply_error(res, 400, "parse", e.what());
    } catch (UsageError const& e) {
      reply_error(res, 400, "usage", e.what());
    } catch (ValidationError const& e) {
      reply_error(res, 422, "validation", e.what());
    } catch (NotFoundError const& e) {
      reply_error(res, 404, "not_found", e.what());
    } catch (ConflictError const& e) {
      reply_error(res, 409, "conflict", e.what());
    } catch (std::exception const& e) {
      reply_error(res, 500, "internal", e.what());
    }
  };
}

}  // namespace

ListenAddress parse_listen_address(std::string_view text) {
  ListenAddress addr;
  auto colon = text.rfind(':');
  std::string_view port = text;
  if (colon != std::string_view::npos) {
    if (colon > 0) addr.host = std::string(text.substr(0, colon));
    port = text.substr(colon + 1);
  }
  int value = -1;
  auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (ec != std::errc() || ptr != port.data() + port.size() || value < 0 ||
      value > 65535) {
    throw UsageError("invalid listen address '" + std::string(text) + "'");
  }
  addr.port = value;
  return addr;
}

struct ReviewServer::Impl {
  ReviewStore& store;
  httplib::Server server;
  bool bound = false;

  explicit Impl(ReviewStore& s) : store(s) {}
};

ReviewServer::ReviewServer(ReviewStore& store,
                           std::optional<std::filesystem::path> ui_dir)
    : impl_(std::make_unique<Impl>(store)) {
  auto& svr = impl_->server;
  auto& st = impl_->store;

  svr.Get("/healthz", guarded([](auto const&, auto& res) {
            reply(res, 200, Json{{"status", "ok"}});
          }));

  svr.Post("/sessions", guarded([&st](auto const& req, auto& res) {
             auto body = parse_json(req.body, "request body");
             Language lang;
             std::string reviewer;
             std::vector<UnitKey> keys;
             try {
               lang = language_from_code(body.at("lang").template get<std::string>());
               reviewer = body.at("reviewer_id").template get<std::string>();
               for (auto const& k : body.value("keys", Json::array())) {
                 UnitKey key;
                 key.record_id = k.at("record_id").template get<std::string>();
                 key.turn_index = k.at("turn_index").template get<int>();
                 key.lang = k.contains("lang")
                                ? language_from_code(
                                      k.at("lang").template get<std::string>())
                                : lang;
                 keys.push_back(std::move(key));
               }
             } catch (Json::exception const& e) {
               throw UsageError(std::string("bad session request: ") + e.what());
             }
             auto session = st.create_session(lang, reviewer, keys);
             reply(res, 201, session_to_json(session));
           }));

  svr.Get(R"(/sessions/([^/]+))", guarded([&st](auto const& req, auto& res) {
            auto s = st.session(req.matches[1].str());
            if (!s) throw NotFoundError("unknown session '" + req.matches[1].str() + "'");
            reply(res, 200, session_to_json(*s));
          }));

  svr.Get(R"(/sessions/([^/]+)/next)", guarded([&st](auto const& req, auto& res) {
            reply(res, 200, next_unit_to_json(st.next_unit(req.matches[1].str())));
          }));

  svr.Post(R"(/sessions/([^/]+)/submit)",
           guarded([&st](auto const& req, auto& res) {
             auto body = parse_json(req.body, "request body");
             auto sub = submission_from_json(body);
             auto p = st.submit_correction(req.matches[1].str(), sub);
             reply(res, 200,
                   Json{{"progress", Json{{"done", p.done}, {"total", p.total}}},
                        {"done", p.done >= p.total}});
           }));

  svr.Get(R"(/progress/([^/]+))", guarded([&st](auto const& req, auto& res) {
            auto lang = language_from_code(req.matches[1].str());
            reply(res, 200, progress_to_json(st.progress_report(lang)));
          }));

  if (ui_dir) {
    if (!svr.set_mount_point("/ui/", ui_dir->string())) {
      throw ConfigError("UI bundle directory '" + ui_dir->string() +
                        "' does not exist");
    }
    svr.Get("/ui", [](auto const&, auto& res) { res.set_redirect("/ui/"); });
  }
}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::bind(ListenAddress const& address) {
  auto& svr = impl_->server;
  int port = address.port;
  if (port == 0) {
    port = svr.bind_to_any_port(address.host);
    if (port < 0) throw Error("cannot bind " + address.host);
  } else if (!svr.bind_to_port(address.host, port)) {
    throw Error("cannot bind " + address.host + ":" + std::to_string(port));
  }
  impl_->bound = true;
  return port;
}

void ReviewServer::serve() {
  if (!impl_->bound) throw UsageError("server is not bound");
  impl_->server.listen_after_bind();
}

void ReviewServer::start() {
  if (!impl_->bound) throw UsageError("server is not bound");
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void ReviewServer::stop() {
  if (impl_) impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace palo_forge
