// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

int main() { return 0; }
