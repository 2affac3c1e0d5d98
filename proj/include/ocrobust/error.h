// Copyright 2026 The ocrobust Authors.
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

#ifndef OCROBUST_ERROR_H_
#define OCROBUST_ERROR_H_

#include <stdexcept>
#include <string>

namespace ocrobust {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated an operation's precondition (bad hyper-parameter, empty
// input where one is required, misuse of an untrained model).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Input data could not be read or does not match its declared format.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace ocrobust

#endif  // OCROBUST_ERROR_H_
