public class Answer {
    public static int route(int gate, int load) {
        int cost = 0;
        int tolls = 0;
        switch (gate) {
            case 1:
                cost = load + 1;
                break;
            default:
                cost = load;
                break;
        }
        if (cost > 5) {
            cost = cost - 5;
            tolls = tolls + 1;
        }
        return cost + tolls;
    }
}
