# Common utilities and helpers
