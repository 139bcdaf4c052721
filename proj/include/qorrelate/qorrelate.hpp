// Copyright 2026 The qorrelate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QORRELATE_QORRELATE_HPP
#define QORRELATE_QORRELATE_HPP

#include <qorrelate/matkernel.hpp>
#include <qorrelate/subasis.hpp>
#include <qorrelate/qstate.hpp>
#include <qorrelate/optimize.hpp>
#include <qorrelate/measurement.hpp>
#include <qorrelate/uncertainty.hpp>
#include <qorrelate/criteria.hpp>
#include <qorrelate/experiments.hpp>

#endif  // QORRELATE_QORRELATE_HPP
