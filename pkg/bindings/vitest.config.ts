export default {
  test: {
    // Each assertion spawns a Python process and some tests also drive the
    // CLI, so the default 5 s budget is too tight.
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
};
