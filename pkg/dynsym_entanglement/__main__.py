#!/usr/bin/env python3

from dynsym_entanglement.cli import main

if __name__ == '__main__':
    raise SystemExit(main())
