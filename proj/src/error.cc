// Copyright 2026 The mpbt Authors.
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

#include "mpbt/error.h"

namespace mpbt {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDuplicateNodeId: return "DuplicateNodeId";
    case ErrorCode::kSourceMissing: return "SourceMissing";
    case ErrorCode::kInfeasibleChild: return "InfeasibleChild";
    case ErrorCode::kInvalidTree: return "InvalidTree";
    case ErrorCode::kCycleWouldForm: return "CycleWouldForm";
    case ErrorCode::kNotNeighbor: return "NotNeighbor";
    case ErrorCode::kParentDisconnected: return "ParentDisconnected";
    case ErrorCode::kDisconnected: return "Disconnected";
    case ErrorCode::kDisconnectedAtFixedPower: return "DisconnectedAtFixedPower";
    case ErrorCode::kNotAChild: return "NotAChild";
    case ErrorCode::kEmptyActionSet: return "EmptyActionSet";
    case ErrorCode::kLimitExceeded: return "LimitExceeded";
    case ErrorCode::kInfeasibleSolution: return "InfeasibleSolution";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kSchemeNotBudgetBalanced: return "SchemeNotBudgetBalanced";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace mpbt
