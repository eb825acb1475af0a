#pragma once

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace arisopt {

/// Run-log records, one line each, as space-separated key=value pairs:
///
///   inner q=<outer> l=<inner> lambda=<..> objective=<..> sdp_status=<..> sdp_iters=<..> primal_res=<..> dual_res=<..>
///   outer q=<outer> sum_power_w=<..> max_power_change_w=<..> lambda=<..> inner_iters=<..> sdp_iters=<..> jammer_gain=<..>
///   init stage=<jammer_min|powers|constrained> ...
///   final ...
///
/// The first token names the record kind.
class RunLog {
 public:
  explicit RunLog(std::ostream* sink = nullptr) : sink_(sink) {}

  class Record {
   public:
    explicit Record(std::string kind) { os_.precision(10); os_ << kind; }
    template <class T>
    Record& kv(const char* key, const T& value) {
      os_ << ' ' << key << '=' << value;
      return *this;
    }
    std::string str() const { return os_.str(); }

   private:
    std::ostringstream os_;
  };

  void emit(const Record& record) {
    lines_.push_back(record.str());
    if (sink_ != nullptr) *sink_ << lines_.back() << '\n';
  }

  const std::vector<std::string>& lines() const { return lines_; }

 private:
  std::ostream* sink_;
  std::vector<std::string> lines_;
};

}  // namespace arisopt
