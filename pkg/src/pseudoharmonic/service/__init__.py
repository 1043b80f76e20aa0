"""HTTP facade over the library; the CLI talks to this, in process or remote."""
