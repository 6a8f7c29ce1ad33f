#include "fracheat/error.hpp"

namespace fracheat {

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace fracheat
