#include "meshsuggest/errors.hpp"

namespace meshsuggest {

UnmatchedGroup::UnmatchedGroup(std::vector<std::string> keywords)
    : Error([&] {
          std::string msg = "suggestion group matches no single clause:";
          for (const auto& k : keywords) msg += " [" + k + "]";
          return msg;
      }()),
      keywords_(std::move(keywords)) {}

}  // namespace meshsuggest
