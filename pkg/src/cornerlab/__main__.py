from cornerlab.cli import main

main()
