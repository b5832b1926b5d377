#ifndef HOLOPLAN_HTTP_SERVER_H_
#define HOLOPLAN_HTTP_SERVER_H_

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "holoplan/service.h"

namespace httplib {
class Server;
}

namespace holoplan {

// HTTP transport for the wire protocol:
//   POST /api/<op>                         request/response (JSON body)
//   GET  /api/sessions/<id>/events?after=N  long-poll for pushed messages
//   GET  /api/sessions/<id>/stream?after=N  the same messages as SSE
// A ticker thread runs the selection loop at `cadence_hz`.
class HttpServer {
 public:
  explicit HttpServer(Service& service, double cadence_hz = 60.0);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and serves in background threads. Port 0 picks a free port; the
  // bound port is returned. Throws IoError when binding fails.
  int Start(const std::string& host, int port);
  void Stop();
  // Blocks until Stop() is called from another thread or a signal handler.
  void Wait();

 private:
  void Routes();

  Service& service_;
  double cadence_hz_;
  std::unique_ptr<httplib::Server> server_;
  std::atomic<bool> running_{false};
  std::thread listener_;
  std::thread ticker_;
};

}  // namespace holoplan

#endif  // HOLOPLAN_HTTP_SERVER_H_
