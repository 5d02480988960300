# fixnet test package
