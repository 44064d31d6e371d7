//
// Project MolProbe - Copyright 2026 MolProbe Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLPROBE_CORE_FORMAT_H_
#define MOLPROBE_CORE_FORMAT_H_

#include <string>

namespace molprobe {

// Shortest decimal text that round-trips the double; used for every number
// written to CSV so repeated runs are byte-identical.
std::string format_double(double value);

}  // namespace molprobe

#endif  // MOLPROBE_CORE_FORMAT_H_
