#include "holoplan/http_server.h"

#include <chrono>

#include <httplib.h>

#include "holoplan/error.h"

namespace holoplan {

namespace {

using nlohmann::json;
using namespace std::chrono_literals;

void Reply(httplib::Response& res, const json& body) {
  res.status = body.value("ok", true) ? 200 : 400;
  res.set_content(body.dump(), "application/json");
}

std::uint64_t AfterParam(const httplib::Request& req) {
  return req.has_param("after") ? std::stoull(req.get_param_value("after")) : 0;
}

}  // namespace

HttpServer::HttpServer(Service& service, double cadence_hz)
    : service_(service), cadence_hz_(cadence_hz), server_(std::make_unique<httplib::Server>()) {
  Routes();
}

HttpServer::~HttpServer() { Stop(); }

void HttpServer::Routes() {
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
  server_->Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  server_->Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"ok":true})", "application/json");
  });

  server_->Post(R"(/api/([a-z_]+))", [this](const httplib::Request& req, httplib::Response& res) {
    json request = json::parse(req.body.empty() ? "{}" : req.body, nullptr, false);
    if (request.is_discarded() || !request.is_object()) {
      Reply(res, {{"ok", false},
                  {"error", {{"code", "InvalidArgument"}, {"message", "body must be a JSON object"}}}});
      return;
    }
    request["op"] = req.matches[1].str();
    Reply(res, service_.Handle(request));
  });

  server_->Get(R"(/api/sessions/([A-Za-z0-9_-]+)/events)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 try {
                   const auto session = service_.Get(req.matches[1].str());
                   int timeout_ms = 25000;
                   if (req.has_param("timeout_ms")) {
                     timeout_ms = std::stoi(req.get_param_value("timeout_ms"));
                   }
                   const auto events = session->events().WaitSince(
                       AfterParam(req), std::chrono::milliseconds(timeout_ms));
                   Reply(res, {{"ok", true}, {"events", events}});
                 } catch (const Error& e) {
                   Reply(res, {{"ok", false},
                               {"error", {{"code", ErrorCodeName(e.code())}, {"message", e.what()}}}});
                 }
               });

  server_->Get(R"(/api/sessions/([A-Za-z0-9_-]+)/stream)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 std::shared_ptr<Session> session;
                 try {
                   session = service_.Get(req.matches[1].str());
                 } catch (const Error& e) {
                   Reply(res, {{"ok", false},
                               {"error", {{"code", ErrorCodeName(e.code())}, {"message", e.what()}}}});
                   return;
                 }
                 auto cursor = std::make_shared<std::uint64_t>(AfterParam(req));
                 res.set_chunked_content_provider(
                     "text/event-stream",
                     [this, session, cursor](std::size_t, httplib::DataSink& sink) {
                       if (!running_) return false;
                       for (const auto& e : session->events().WaitSince(*cursor, 500ms)) {
                         *cursor = e.at("seq").get<std::uint64_t>();
                         const std::string chunk = "id: " + std::to_string(*cursor) +
                                                   "\nevent: " + e.at("type").get<std::string>() +
                                                   "\ndata: " + e.dump() + "\n\n";
                         if (!sink.write(chunk.data(), chunk.size())) return false;
                       }
                       return sink.is_writable();
                     });
               });
}

int HttpServer::Start(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw Error(ErrorCode::kIoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  running_ = true;
  listener_ = std::thread([this] { server_->listen_after_bind(); });
  ticker_ = std::thread([this] {
    const auto period = std::chrono::duration<double>(1.0 / cadence_hz_);
    auto next = std::chrono::steady_clock::now();
    while (running_) {
      service_.TickSelection();
      next += std::chrono::duration_cast<std::chrono::steady_clock::duration>(period);
      std::this_thread::sleep_until(next);
    }
  });
  return bound;
}

void HttpServer::Stop() {
  if (!running_.exchange(false)) return;
  server_->stop();
  if (listener_.joinable()) listener_.join();
  if (ticker_.joinable()) ticker_.join();
}

void HttpServer::Wait() {
  if (listener_.joinable()) listener_.join();
}

}  // namespace holoplan
