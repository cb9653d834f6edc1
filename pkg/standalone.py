#!/usr/bin/env python3

from dynsym_entanglement.__main__ import main

if __name__ == '__main__':
    raise SystemExit(main())
