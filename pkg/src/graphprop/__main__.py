from graphprop.cli import main

main()
