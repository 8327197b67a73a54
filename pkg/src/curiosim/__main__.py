from curiosim.cli import main

raise SystemExit(main())
